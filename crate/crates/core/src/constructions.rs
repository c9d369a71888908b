//! Explicit auxiliary functions in dimensions one, two and three.
//!
//! * [`one_dim_coeffs`]: a family `g_m` on `ℝ/mℤ` with sharp ratio 1 for
//!   every `m ≥ 3`, together with its closed form [`one_dim_closed_form`].
//! * [`hex_g2`]: a four-term series on the hexagonal lattice scaled by 2,
//!   with sharp ratio `2/√3`.
//! * [`cubic_g3`]: a four-term series on `√2ℤ³`, with sharp ratio `√2`.
//!
//! The two-dimensional function factors as a product of cosines after an
//! affine change of variables, which [`exact_region_sign_2d`] uses to decide
//! its sign without cancellation.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::auxfn::{CosineSeries, Term};
use crate::error::{Error, Result};
use crate::lattice::{sqrt3, Lattice};
use crate::math::{abs, cos, round, round_even, sin, sqrt, PI, TAU};
use crate::quadrature;

/// Distance from `{0, ±1} + mℤ` below which the closed form falls back to
/// the series.
pub const SINGULARITY_GUARD: f64 = 1e-6;

/// Factors closer than this to zero make [`exact_region_sign_2d`] report a
/// zero sign.
pub const SIGN_ZERO_TOL: f64 = 1e-12;

/// `s_k = [(k+2)·sin(2π/m) − sin(2(k+2)π/m)] / [(2 − 2cos(2π/m))·sin(2π/m)]`.
pub fn s_coefficient(m: u32, k: u32) -> f64 {
    let m = m as f64;
    let k = k as f64;
    let w = TAU / m;
    ((k + 2.0) * sin(w) - sin((k + 2.0) * w)) / ((2.0 - 2.0 * cos(w)) * sin(w))
}

/// Cosine coefficients of the one-dimensional function `g_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneDimCoefficients {
    pub m: u32,
    /// `c_0 … c_{m−2}`; `c_k` multiplies `cos(2πkx/m)`.
    pub c: Vec<f64>,
    /// `g_m(0) = m² / (2 − 2cos(2π/m))`.
    pub value_at_zero: f64,
}

impl OneDimCoefficients {
    /// The series on `mℤ` with frequencies `k/m`.
    pub fn series(&self) -> CosineSeries {
        let lattice = Lattice::integer(1, self.m).expect("m ≥ 3");
        let m = self.m as f64;
        let terms = self
            .c
            .iter()
            .enumerate()
            .map(|(k, &c)| Term::new(vec![k as f64 / m], c))
            .collect();
        CosineSeries::new(lattice, terms).expect("coefficients are positive and distinct")
    }

    /// `Σ c_k cos(2πkx/m)`, with the phase reduced modulo one.
    pub fn evaluate(&self, x: f64) -> f64 {
        let m = self.m as f64;
        let y = x - m * round(x / m);
        self.c
            .iter()
            .enumerate()
            .map(|(k, &c)| c * cos(TAU * k as f64 * y / m))
            .sum()
    }
}

pub fn one_dim_coeffs(m: u32) -> Result<OneDimCoefficients> {
    if m < 3 {
        return Err(Error::MTooSmall(m));
    }
    let mut c = Vec::with_capacity(m as usize - 1);
    c.push(s_coefficient(m, m - 2));
    for k in 1..=m - 2 {
        c.push(2.0 * s_coefficient(m, m - 2 - k));
    }
    let mf = m as f64;
    Ok(OneDimCoefficients {
        m,
        c,
        value_at_zero: mf * mf / (2.0 - 2.0 * cos(TAU / mf)),
    })
}

/// `(cos 2πx − 1) / (2(cos(2πx/m) − 1)(cos(2πx/m) − cos(2π/m)))`.
///
/// Within [`SINGULARITY_GUARD`] of `{0, ±1} + mℤ` numerator and denominator
/// both vanish, and the cosine series is evaluated instead.
pub fn one_dim_closed_form(m: u32, x: f64) -> Result<f64> {
    if m < 3 {
        return Err(Error::MTooSmall(m));
    }
    let mf = m as f64;
    let y = x - mf * round(x / mf);
    if abs(y) < SINGULARITY_GUARD || abs(abs(y) - 1.0) < SINGULARITY_GUARD {
        return Ok(one_dim_coeffs(m)?.evaluate(x));
    }
    // half-angle form of the same quotient, free of `cos θ − 1` cancellation
    let num = sin(PI * y);
    let den = sin(PI * y / mf);
    Ok(-(num * num) / (4.0 * den * den * sin(PI * (y + 1.0) / mf) * sin(PI * (y - 1.0) / mf)))
}

/// The hexagonal basis `v_1 = (1, 0)`, `v_2 = (1/2, √3/2)` scaled by `m`.
pub fn hex_lattice(m: u32) -> Result<Lattice> {
    Lattice::new(&[vec![1.0, 0.0], vec![0.5, sqrt3() / 2.0]], m)
}

/// `g_2(x) = 1 + cos(a_1·x) + cos(a_2·x) + cos(a_3·x)` on the hexagonal
/// lattice scaled by 2.
pub fn hex_g2() -> CosineSeries {
    let s3 = sqrt3();
    let terms = vec![
        Term::new(vec![0.0, 0.0], 1.0),
        Term::new(vec![0.5, -0.5 / s3], 1.0),
        Term::new(vec![0.0, 1.0 / s3], 1.0),
        Term::new(vec![0.5, 0.5 / s3], 1.0),
    ];
    CosineSeries::new(hex_lattice(2).expect("hexagonal basis"), terms).expect("valid series")
}

/// `√2ℤ³` (with `m = 1`).
pub fn cubic_lattice() -> Lattice {
    let r = sqrt(2.0);
    Lattice::new(
        &[vec![r, 0.0, 0.0], vec![0.0, r, 0.0], vec![0.0, 0.0, r]],
        1,
    )
    .expect("cubic basis")
}

/// `g(x) = 1 + Σ_k cos(√2π x_k)` on `√2ℤ³`.
pub fn cubic_g3() -> CosineSeries {
    let h = 1.0 / sqrt(2.0);
    let terms = vec![
        Term::new(vec![0.0, 0.0, 0.0], 1.0),
        Term::new(vec![h, 0.0, 0.0], 1.0),
        Term::new(vec![0.0, h, 0.0], 1.0),
        Term::new(vec![0.0, 0.0, h], 1.0),
    ];
    CosineSeries::new(cubic_lattice(), terms).expect("valid series")
}

/// The six points of the hexagonal lattice at distance 1 from the origin.
pub fn hex_kissing_points() -> Vec<Vec<f64>> {
    let h = sqrt3() / 2.0;
    vec![
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![0.5, h],
        vec![-0.5, -h],
        vec![-0.5, h],
        vec![0.5, -h],
    ]
}

/// The twelve points `(±√2/2, ±√2/2, 0)` and their coordinate permutations.
pub fn cubic_kissing_points() -> Vec<Vec<f64>> {
    let h = sqrt(2.0) / 2.0;
    let mut out = Vec::with_capacity(12);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for si in [h, -h] {
            for sj in [h, -h] {
                let mut p = vec![0.0; 3];
                p[i] = si;
                p[j] = sj;
                out.push(p);
            }
        }
    }
    out
}

/// `f(x, y) = 1 + cos πx + cos πy + cos π(x+y)` and its factored form
/// `4·cos(πx/2)·cos(πy/2)·cos(π(x+y)/2)`.
pub fn lemma_f(x: f64, y: f64) -> (f64, f64) {
    let value = 1.0 + cos(PI * x) + cos(PI * y) + cos(PI * (x + y));
    let factored = 4.0 * cos(PI * x / 2.0) * cos(PI * y / 2.0) * cos(PI * (x + y) / 2.0);
    (value, factored)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Result of [`exact_region_sign_2d`].
#[derive(Debug, Clone, PartialEq)]
pub struct SignCertificate {
    pub sign: Sign,
    /// `A·x` reduced modulo `2ℤ²`.
    pub reduced: [f64; 2],
    /// The three cosine factors, each written as `sin(π(1 − |y|)/2)`.
    pub factors: [f64; 3],
    /// `4·factor_0·factor_1·factor_2 = g_2(x)`.
    pub value: f64,
}

/// Sign of `g_2(x)` on the region `‖[x]‖ ≥ 1`, from the cosine-product
/// factorization of `g_2(A⁻¹·)`.
pub fn exact_region_sign_2d(x: [f64; 2]) -> Result<SignCertificate> {
    let lattice = hex_lattice(2)?;
    let q = lattice.quotient_norm(&x)?.value;
    if q < 1.0 - SIGN_ZERO_TOL {
        return Err(Error::NotInRegion { norm: q });
    }
    let s3 = sqrt3();
    let xt = [x[0] - x[1] / s3, 2.0 * x[1] / s3];
    let reduce = |v: f64| v - 2.0 * round_even(v / 2.0);
    let y = [reduce(xt[0]), reduce(xt[1])];
    let half = |t: f64| sin(PI * (1.0 - abs(t)) / 2.0);
    let factors = [half(y[0]), half(y[1]), half(y[0] + y[1])];
    let value = 4.0 * factors[0] * factors[1] * factors[2];
    let sign = if factors.iter().any(|f| abs(*f) <= SIGN_ZERO_TOL) {
        Sign::Zero
    } else if value < 0.0 {
        Sign::Negative
    } else {
        Sign::Positive
    };
    Ok(SignCertificate {
        sign,
        reduced: y,
        factors,
        value,
    })
}

/// Outcome of [`l1_region_inclusion_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionReport {
    /// `max(2π − ‖u‖₁)` over accepted samples; `≤ 0` confirms the inclusion.
    pub max_violation: f64,
    pub worst: Option<[f64; 3]>,
    pub accepted: u64,
    pub drawn: u64,
    /// `max(‖u_i‖₂ − √2π)` over the seven hull vertices.
    pub vertex_excess: f64,
}

/// The vertices of `{u ∈ [0,π]³ : ‖u‖₁ ≤ 2π}`.
pub fn l1_hull_vertices() -> [[f64; 3]; 7] {
    [
        [0.0, 0.0, 0.0],
        [PI, PI, 0.0],
        [PI, 0.0, PI],
        [0.0, PI, PI],
        [PI, 0.0, 0.0],
        [0.0, PI, 0.0],
        [0.0, 0.0, PI],
    ]
}

/// Monte-Carlo check that `u ∈ [0,π]³` with `‖u‖₂ > √2π` has
/// `‖u‖₁ > 2π`, over `samples` accepted draws.
pub fn l1_region_inclusion_check<R: Rng + ?Sized>(samples: u64, rng: &mut R) -> Result<InclusionReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1"));
    }
    let r2 = 2.0 * PI * PI;
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst = None;
    let mut accepted = 0;
    let mut drawn = 0;
    while accepted < samples {
        let u = [
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * PI,
        ];
        drawn += 1;
        if u[0] * u[0] + u[1] * u[1] + u[2] * u[2] <= r2 {
            continue;
        }
        accepted += 1;
        let v = TAU - (u[0] + u[1] + u[2]);
        if v > max_violation {
            max_violation = v;
            worst = Some(u);
        }
    }
    let vertex_excess = l1_hull_vertices()
        .iter()
        .map(|u| sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) - sqrt(r2))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(InclusionReport {
        max_violation,
        worst,
        accepted,
        drawn,
        vertex_excess,
    })
}

/// `(2/m)·∫_{−m/2}^{m/2} g_m(x)·cos(2πlx/m) dx` (factor `1/m` when `l = 0`),
/// by composite Gauss–Legendre with panel doubling to `1e−10`.
pub fn fourier_coefficient_quadrature(m: u32, l: u32) -> Result<f64> {
    let g = one_dim_coeffs(m)?;
    let mf = m as f64;
    let lf = l as f64;
    let integral = quadrature::integrate_from(
        &mut |x: f64| g.evaluate(x) * cos(TAU * lf * x / mf),
        -mf / 2.0,
        mf / 2.0,
        1e-10,
        m as usize,
    )?;
    let factor = if l == 0 { 1.0 / mf } else { 2.0 / mf };
    Ok(factor * integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_coefficient_examples() {
        assert!((s_coefficient(3, 0) - 1.0).abs() < 1e-12);
        assert!((s_coefficient(3, 1) - 1.0).abs() < 1e-12);
        assert!((s_coefficient(4, 1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn one_dim_examples() {
        let g3 = one_dim_coeffs(3).unwrap();
        assert!((g3.c[0] - 1.0).abs() < 1e-12 && (g3.c[1] - 2.0).abs() < 1e-12);
        assert!((g3.value_at_zero - 3.0).abs() < 1e-12);
        let g4 = one_dim_coeffs(4).unwrap();
        for (a, b) in g4.c.iter().zip([2.0, 4.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((g4.value_at_zero - 8.0).abs() < 1e-12);
        assert_eq!(one_dim_coeffs(2), Err(Error::MTooSmall(2)));
    }

    #[test]
    fn closed_form_examples() {
        assert!((one_dim_closed_form(3, 1.5).unwrap() + 1.0).abs() < 1e-12);
        assert!((one_dim_closed_form(3, 1e-9).unwrap() - 3.0).abs() < 1e-9);
        let s = one_dim_coeffs(5).unwrap();
        assert!((one_dim_closed_form(5, 2.0).unwrap() - s.evaluate(2.0)).abs() < 1e-9);
        assert!(one_dim_closed_form(2, 0.5).is_err());
    }

    #[test]
    fn hex_and_cubic_examples() {
        let g2 = hex_g2();
        for p in hex_kissing_points() {
            assert!(g2.evaluate(&p).abs() < 1e-12);
        }
        let g3 = cubic_g3();
        assert_eq!(g3.evaluate(&[0.0; 3]), 4.0);
        for p in cubic_kissing_points() {
            assert!(g3.evaluate(&p).abs() < 1e-12);
        }
        assert!(g3.verify_dual_membership().ok);
    }

    #[test]
    fn lemma_f_examples() {
        assert_eq!(lemma_f(0.0, 0.0).0, 4.0);
        assert!(lemma_f(1.0, 0.0).0.abs() < 1e-15);
        let (v, f) = lemma_f(0.7, 0.5);
        assert!((v - f).abs() < 1e-12);
        assert!(v <= 0.0);
    }

    #[test]
    fn region_sign_examples() {
        assert_eq!(exact_region_sign_2d([1.0, 0.0]).unwrap().sign, Sign::Zero);
        let c = exact_region_sign_2d([1.0, 0.3]).unwrap();
        assert_eq!(c.sign, Sign::Negative);
        assert!((c.value - hex_g2().evaluate(&[1.0, 0.3])).abs() < 1e-12);
        assert!(matches!(
            exact_region_sign_2d([0.2, 0.1]),
            Err(Error::NotInRegion { .. })
        ));
        // (1.1, 0.1) is within 0.906 of (2, 0), so it lies outside the region.
        assert!(matches!(
            exact_region_sign_2d([1.1, 0.1]),
            Err(Error::NotInRegion { .. })
        ));
    }

    #[test]
    fn hull_vertex_on_sphere() {
        let v = l1_hull_vertices()[1];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!((n - 2f64.sqrt() * PI).abs() < 1e-12);
        let u = [PI, PI, 0.1 * PI];
        assert!((u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt() > 2f64.sqrt() * PI);
        assert!(u[0] + u[1] + u[2] > TAU);
    }

    #[test]
    fn quadrature_examples() {
        assert!(fourier_coefficient_quadrature(5, 4).unwrap().abs() < 1e-8);
        let c = one_dim_coeffs(5).unwrap().c[3];
        let q = fourier_coefficient_quadrature(5, 3).unwrap();
        assert!(q > 0.0 && (q - c).abs() < 1e-8);
        assert!((fourier_coefficient_quadrature(3, 1).unwrap() - 2.0).abs() < 1e-8);
    }
}
