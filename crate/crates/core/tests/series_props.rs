use proptest::prelude::*;
use spherelp_core::auxfn::cell_integral_midpoint;
use spherelp_core::constructions::{cubic_g3, hex_g2, one_dim_coeffs};
use spherelp_core::CosineSeries;

fn constructions() -> Vec<CosineSeries> {
    vec![
        hex_g2(),
        cubic_g3(),
        one_dim_coeffs(3).unwrap().series(),
        one_dim_coeffs(8).unwrap().series(),
    ]
}

fn pad(x: &[f64], n: usize) -> Vec<f64> {
    x[..n].to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn even(x in prop::collection::vec(-20.0f64..20.0, 3)) {
        for s in constructions() {
            let p = pad(&x, s.dim());
            let q: Vec<f64> = p.iter().map(|v| -v).collect();
            prop_assert!((s.evaluate(&p) - s.evaluate(&q)).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic(x in prop::collection::vec(-20.0f64..20.0, 3), k in prop::collection::vec(-4i64..4, 3)) {
        for s in constructions() {
            let n = s.dim();
            let v = s.lattice().point(&k[..n]);
            prop_assert!(s.periodicity_residual(&pad(&x, n), &v).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn lipschitz(x in prop::collection::vec(-5.0f64..5.0, 3), d in prop::collection::vec(-0.5f64..0.5, 3)) {
        for s in constructions() {
            let n = s.dim();
            let a = pad(&x, n);
            let b: Vec<f64> = a.iter().zip(&d).map(|(u, v)| u + v).collect();
            let dist = d[..n].iter().map(|v| v * v).sum::<f64>().sqrt();
            let diff = (s.evaluate(&a) - s.evaluate(&b)).abs();
            prop_assert!(diff <= s.lipschitz_constant() * dist + 1e-12);
        }
    }

    #[test]
    fn sharp_is_scale_invariant(alpha in 1e-3f64..1e3) {
        for s in constructions() {
            let t = s.scaled(alpha).unwrap();
            prop_assert!((t.sharp() - s.sharp()).abs() < 1e-12);
        }
    }
}

#[test]
fn midpoint_rule_reproduces_mean_value() {
    for s in constructions() {
        let mut prev = f64::NAN;
        for per_axis in [4, 8, 16, 32] {
            let q = cell_integral_midpoint(&s, per_axis);
            if (q - prev).abs() <= 1e-9 * q.abs() {
                break;
            }
            prev = q;
        }
        assert!((prev - s.hat_zero()).abs() <= 1e-6 * s.hat_zero());
    }
}
