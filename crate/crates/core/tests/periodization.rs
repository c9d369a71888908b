use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spherelp_core::periodization::*;

#[test]
fn triangle_poisson_consistency() {
    let p = triangle();
    for m in 1..=8u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        let r = poisson_residual(&p, m, 10_000, 100, &mut rng).unwrap();
        assert!(r.max_residual <= r.bound, "m={m} {r:?}");
        assert!(r.max_residual <= 1e-3, "m={m} {r:?}");
        if m >= 2 {
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            let r2 = poisson_residual(&p, m, 20_000, 100, &mut rng).unwrap();
            let ratio = r2.max_residual / r.max_residual;
            assert!((0.35..=0.65).contains(&ratio), "m={m} ratio={ratio}");
        }
    }
}

#[test]
fn spectral_mean_is_hat_zero() {
    for m in 1..=8 {
        let s = periodize_spectrum(&triangle(), m, 500).unwrap();
        assert!((s.hat_zero() - 1.0).abs() < 1e-12);
        assert!(s.verify_dual_membership().ok);
    }
}

#[test]
fn triangle_sharp_sequence_is_one() {
    let ms: Vec<u32> = (2..=30).collect();
    assert!(sharp_sequence(&triangle(), &ms).unwrap().iter().all(|&v| v == 1.0));
}

#[test]
fn ce_h_sharp_sequence_near_one() {
    let ms: Vec<u32> = (3..=50).collect();
    for (m, v) in ms.iter().zip(sharp_sequence(&ce_h(), &ms).unwrap()) {
        assert!((v - 1.0).abs() < 1e-8, "m={m} v={v}");
    }
}

#[test]
fn tail_bound_is_sound() {
    let p = ce_h();
    for m in [1u32, 2, 5] {
        for x in [0.0, 0.3, 1.7, -2.2] {
            let mut tol = 1e-4;
            let mut prev = periodize_direct_with_tol(&p, m, x, tol).unwrap();
            for _ in 0..6 {
                tol /= 2.0;
                let next = periodize_direct_with_tol(&p, m, x, tol).unwrap();
                assert!((next.value - prev.value).abs() <= prev.tail_bound + 1e-15);
                assert!(next.tail_bound <= tol);
                prev = next;
            }
        }
    }
}

#[test]
fn ce_h_decay_bound_holds_on_test_range() {
    let p = ce_h();
    let mut x: f64 = 10.0;
    while x <= 1e6 {
        for y in [x, x + 0.5, -x - 0.25] {
            let bound = p.decay.c * (1.0 + y.abs()).powf(-1.0 - p.decay.delta);
            assert!((p.f)(y).abs() <= bound, "x={y}");
        }
        x *= 1.01;
    }
}

#[test]
fn triangle_fourier_decay_bound() {
    let p = triangle();
    let d = p.fourier_decay.unwrap();
    let hat = p.fourier.unwrap();
    for i in 0..200_000 {
        let t = i as f64 * 1e-3;
        assert!(hat(t) <= d.c * (1.0 + t).powf(-1.0 - d.delta));
    }
}
