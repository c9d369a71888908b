//! Periodizing one-dimensional profiles over `mℤ`.
//!
//! `f_m(x) = Σ_k f(x + mk)` is computed directly, with an explicit tail
//! bound, or (when `f̂` is known) through Poisson summation as the cosine
//! series `Σ_k f̂(k/m)/m · cos(2πkx/m)`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::auxfn::{CosineSeries, Term};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::math::{abs, ceil, floor, powf, sin, PI};
use crate::quadrature;

pub const DEFAULT_DIRECT_TOL: f64 = 1e-10;

/// Spectrum values at or above this are clamped to zero instead of rejected.
const NEGATIVE_SPECTRUM_TOL: f64 = 1e-12;

/// Terms farther out than this are covered by the decay bound of every
/// built-in profile.
const TAIL_START: f64 = 10.0;

/// `|f(x)| ≤ c·(1 + |x|)^{−1−delta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decay {
    pub c: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct AdmissibleProfile1D {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    pub fourier: Option<fn(f64) -> f64>,
    pub decay: Decay,
    /// Decay of `f̂`, needed for spectral tail bounds.
    pub fourier_decay: Option<Decay>,
    /// `f(x) = 0` for `|x| > support`.
    pub support: Option<f64>,
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        sin(PI * x) / (PI * x)
    }
}

fn triangle_f(x: f64) -> f64 {
    let a = abs(x);
    if a >= 1.0 {
        0.0
    } else {
        1.0 - a
    }
}

fn triangle_hat(t: f64) -> f64 {
    let s = sinc(t);
    s * s
}

const CE_H_GUARD: f64 = 1e-6;

fn ce_h_f(x: f64) -> f64 {
    let a = abs(x);
    if a < CE_H_GUARD {
        return 1.0 + (1.0 - PI * PI / 3.0) * x * x;
    }
    if abs(a - 1.0) < CE_H_GUARD {
        return -(a - 1.0) / 2.0;
    }
    let s = sinc(x);
    s * s / (1.0 - x * x)
}

/// `(1 − |x|)` on `[−1, 1]`, with `f̂(t) = (sin πt / πt)²`.
pub fn triangle() -> AdmissibleProfile1D {
    AdmissibleProfile1D {
        name: "triangle",
        f: triangle_f,
        fourier: Some(triangle_hat),
        // max of (1 − x)(1 + x)² on [0, 1] is 32/27
        decay: Decay { c: 32.0 / 27.0, delta: 1.0 },
        // max of sinc²(t)(1 + t)² is about 1.2675
        fourier_decay: Some(Decay { c: 1.27, delta: 1.0 }),
        support: Some(1.0),
    }
}

/// `sin²(πx) / ((πx)²(1 − x²))`. No Fourier evaluator; the decay constants
/// are an engineering bound checked numerically on `[10, 10⁶]`.
pub fn ce_h() -> AdmissibleProfile1D {
    AdmissibleProfile1D {
        name: "ce_h",
        f: ce_h_f,
        fourier: None,
        decay: Decay { c: 1.0, delta: 3.0 },
        fourier_decay: None,
        support: None,
    }
}

pub fn profile_by_name(name: &str) -> Option<AdmissibleProfile1D> {
    match name {
        "triangle" => Some(triangle()),
        "ce_h" => Some(ce_h()),
        _ => None,
    }
}

/// A truncated direct periodization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectSum {
    pub value: f64,
    /// Bound on the omitted terms (zero for compact support).
    pub tail_bound: f64,
    /// Summation ran over `|k| ≤ max_k`.
    pub max_k: u64,
}

pub fn periodize_direct(p: &AdmissibleProfile1D, m: u32, x: f64) -> Result<DirectSum> {
    periodize_direct_with_tol(p, m, x, DEFAULT_DIRECT_TOL)
}

pub fn periodize_direct_with_tol(p: &AdmissibleProfile1D, m: u32, x: f64, tol: f64) -> Result<DirectSum> {
    if m == 0 {
        return Err(Error::InvalidScale);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let mf = m as f64;
    if let Some(r) = p.support {
        let lo = ceil((-r - x) / mf) as i64;
        let hi = floor((r - x) / mf) as i64;
        let mut s = 0.0;
        for k in lo..=hi {
            s += (p.f)(x + mf * k as f64);
        }
        let max_k = lo.unsigned_abs().max(hi.unsigned_abs());
        return Ok(DirectSum {
            value: s,
            tail_bound: 0.0,
            max_k,
        });
    }
    let Decay { c, delta } = p.decay;
    if !(delta > 0.0) {
        return Err(Error::TailNotBounded);
    }
    let y = x - mf * floor(x / mf + 0.5);
    let ya = abs(y);
    let tail = |k: u64| 2.0 * c * powf(1.0 + mf * (k as f64 - 1.0) - ya, -delta) / (mf * delta);
    let mut k = ceil((TAIL_START + ya) / mf) as u64 + 1;
    while tail(k) > tol {
        k = k + k / 2 + 1;
    }
    // shrink back to the smallest admissible K
    let (mut lo, mut hi) = (ceil((TAIL_START + ya) / mf) as u64 + 1, k);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if tail(mid) <= tol {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let k = hi;
    let mut s = (p.f)(y);
    for j in 1..k {
        let j = j as f64;
        s += (p.f)(y + mf * j) + (p.f)(y - mf * j);
    }
    Ok(DirectSum {
        value: s,
        tail_bound: tail(k),
        max_k: k - 1,
    })
}

/// Poisson periodization: the series on `mℤ` with `c_0 = f̂(0)/m` and
/// `c_{k/m} = 2f̂(k/m)/m` for `1 ≤ k ≤ max_index`.
pub fn periodize_spectrum(p: &AdmissibleProfile1D, m: u32, max_index: u64) -> Result<CosineSeries> {
    let hat = p.fourier.ok_or(Error::MissingFourier)?;
    let lattice = Lattice::integer(1, m)?;
    let mf = m as f64;
    let mut terms = Vec::with_capacity(max_index as usize + 1);
    for k in 0..=max_index {
        let t = k as f64 / mf;
        let mut v = hat(t);
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        if v < -NEGATIVE_SPECTRUM_TOL {
            return Err(Error::NegativeSpectrum { index: k, value: v });
        }
        if v < 0.0 {
            v = 0.0;
        }
        let c = if k == 0 { v / mf } else { 2.0 * v / mf };
        terms.push(Term::new(vec![t], c));
    }
    CosineSeries::new(lattice, terms)
}

/// `Σ_{k > max_index} 2|f̂(k/m)|/m ≤ (2C/δ)(1 + max_index/m)^{−δ}`.
pub fn spectral_tail_bound(p: &AdmissibleProfile1D, m: u32, max_index: u64) -> Result<f64> {
    let Decay { c, delta } = p.fourier_decay.ok_or(Error::MissingFourier)?;
    if !(delta > 0.0) {
        return Err(Error::TailNotBounded);
    }
    Ok(2.0 * c / delta * powf(1.0 + max_index as f64 / m as f64, -delta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonResidual {
    pub max_residual: f64,
    pub worst_x: f64,
    /// Spectral tail bound plus the largest direct tail bound.
    pub bound: f64,
}

/// Largest `|direct − spectral|` over the origin and `samples` uniform
/// points of `[0, m)`.
pub fn poisson_residual<R: Rng + ?Sized>(
    p: &AdmissibleProfile1D,
    m: u32,
    max_index: u64,
    samples: usize,
    rng: &mut R,
) -> Result<PoissonResidual> {
    let series = periodize_spectrum(p, m, max_index)?;
    let spectral_tail = spectral_tail_bound(p, m, max_index)?;
    let mf = m as f64;
    let mut worst = (0.0, 0.0);
    let mut direct_tail: f64 = 0.0;
    for i in 0..=samples {
        let x = if i == 0 { 0.0 } else { rng.gen::<f64>() * mf };
        let d = periodize_direct(p, m, x)?;
        direct_tail = direct_tail.max(d.tail_bound);
        let r = abs(d.value - series.evaluate(&[x]));
        if r > worst.0 {
            worst = (r, x);
        }
    }
    Ok(PoissonResidual {
        max_residual: worst.0,
        worst_x: worst.1,
        bound: spectral_tail + direct_tail,
    })
}

/// `f̂(0) = ∫ f` with an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatZero {
    pub value: f64,
    pub error_bound: f64,
}

/// `f̂(0)`, from the Fourier evaluator when present and otherwise by
/// quadrature over `[−A, A]` plus the decay tail `2C(1+A)^{−δ}/δ`.
pub fn hat_zero(p: &AdmissibleProfile1D) -> Result<HatZero> {
    if let Some(hat) = p.fourier {
        return Ok(HatZero {
            value: hat(0.0),
            error_bound: 0.0,
        });
    }
    let (a, tail) = match p.support {
        Some(r) => (r, 0.0),
        None => {
            let Decay { c, delta } = p.decay;
            if !(delta > 0.0) {
                return Err(Error::TailNotBounded);
            }
            let a = 2000.0;
            (a, 2.0 * c * powf(1.0 + a, -delta) / delta)
        }
    };
    let panels = (2.0 * ceil(a)) as usize;
    let tol = 1e-11;
    let value = quadrature::integrate_from(&mut |x| (p.f)(x), -a, a, tol, panels.max(1))?;
    Ok(HatZero {
        value,
        error_bound: tail + tol,
    })
}

/// `f_m(0)/f̂(0)` for each `m`.
pub fn sharp_sequence(p: &AdmissibleProfile1D, ms: &[u32]) -> Result<Vec<f64>> {
    if ms.is_empty() {
        return Ok(Vec::new());
    }
    let h = hat_zero(p)?.value;
    ms.iter()
        .map(|&m| Ok(periodize_direct(p, m, 0.0)?.value / h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn direct_examples() {
        let t = triangle();
        assert_eq!(periodize_direct(&t, 2, 0.0).unwrap().value, 1.0);
        assert_eq!(periodize_direct(&t, 2, 1.0).unwrap().value, 0.0);
        assert!((periodize_direct(&t, 3, 0.4).unwrap().value - 0.6).abs() < 1e-15);
        let bad = AdmissibleProfile1D {
            decay: Decay { c: 1.0, delta: 0.0 },
            ..ce_h()
        };
        assert_eq!(periodize_direct(&bad, 2, 0.0), Err(Error::TailNotBounded));
    }

    #[test]
    fn spectrum_examples() {
        let t = triangle();
        let s = periodize_spectrum(&t, 2, 1).unwrap();
        assert!((s.c0() - 0.5).abs() < 1e-15);
        assert!((s.terms()[1].coefficient - 4.0 / (PI * PI)).abs() < 1e-15);
        for m in 1..6 {
            let s = periodize_spectrum(&t, m, 20).unwrap();
            assert!((s.hat_zero() - 1.0).abs() < 1e-12);
        }
        let c = periodize_spectrum(&t, 3, 0).unwrap();
        assert_eq!(c.terms().len(), 1);
        assert_eq!(periodize_spectrum(&ce_h(), 2, 3), Err(Error::MissingFourier));
    }

    #[test]
    fn negative_spectrum_rejected() {
        let p = AdmissibleProfile1D {
            fourier: Some(|t: f64| 1.0 - t),
            ..triangle()
        };
        assert!(matches!(
            periodize_spectrum(&p, 1, 3),
            Err(Error::NegativeSpectrum { index: 2, .. })
        ));
    }

    #[test]
    fn ce_h_guards() {
        let f = ce_h().f;
        assert_eq!(f(0.0), 1.0);
        assert!((f(1.0 + 1e-7) - f(1.0 + 2e-6)).abs() < 2e-6);
        assert!((f(1e-7) - f(2e-6)).abs() < 1e-10);
        assert!(f(2.0).abs() < 1e-15);
    }

    #[test]
    fn ce_h_hat_zero_is_one() {
        let h = hat_zero(&ce_h()).unwrap();
        assert!((h.value - 1.0).abs() < 1e-8, "{h:?}");
    }

    #[test]
    fn missing_fourier_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            poisson_residual(&ce_h(), 2, 10, 5, &mut rng),
            Err(Error::MissingFourier)
        );
    }

    #[test]
    fn sharp_sequence_examples() {
        let s = sharp_sequence(&triangle(), &[2, 3, 4, 5, 6, 7, 8, 9, 10]).unwrap();
        assert!(s.iter().all(|&v| v == 1.0));
        assert!(sharp_sequence(&triangle(), &[]).unwrap().is_empty());
    }
}
