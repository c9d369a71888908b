//! Finite cosine series on a lattice torus and their nonpositivity
//! certificates.
//!
//! A [`CosineSeries`] represents
//! `g(x) = Σ_t c_t·cos(2π t·x)` with frequencies `t` in the dual lattice
//! `Λ_m*`. Each `±t` pair is stored once and its coefficient is the combined
//! weight of the pair, so evaluation visits every stored term once.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, MEMBERSHIP_TOL};
use crate::math::{abs, ceil, cos_cycles, fma, norm, round, sincos_cycles, sqrt, two_sum, TAU};
use crate::MAX_DIM;

/// Default cap on the number of certification samples.
pub const DEFAULT_SAMPLE_CAP: u64 = 1_000_000_000;

/// Frequencies closer than this (or closer than this to each other's
/// negation) are treated as the same frequency.
const FREQUENCY_TOL: f64 = 1e-12;

/// Frequencies whose dual coordinates are this close to integers are
/// evaluated through those integers.
const EXACT_DUAL_TOL: f64 = 1e-12;

/// One cosine term `c·cos(2π t·x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub frequency: Vec<f64>,
    pub coefficient: f64,
}

impl Term {
    pub fn new(frequency: Vec<f64>, coefficient: f64) -> Self {
        Term {
            frequency,
            coefficient,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosineSeries {
    lattice: Lattice,
    /// The zero frequency is always first.
    terms: Vec<Term>,
    /// Integer dual coordinates of every frequency, when all of them are
    /// dual-lattice members.
    dual_int: Option<Vec<Vec<i64>>>,
}

/// Per-frequency outcome of [`CosineSeries::verify_dual_membership`].
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub ok: bool,
    pub residuals: Vec<f64>,
}

fn canonical_sign(t: &[f64]) -> f64 {
    for &v in t {
        if abs(v) > FREQUENCY_TOL {
            return if v > 0.0 { 1.0 } else { -1.0 };
        }
    }
    1.0
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

impl CosineSeries {
    /// Validates and stores a series.
    ///
    /// Requires exactly one zero frequency with a positive coefficient, all
    /// coefficients nonnegative and finite, and no two frequencies equal up
    /// to sign. Dual-lattice membership of the frequencies is *not* enforced
    /// here; check it with [`Self::verify_dual_membership`].
    pub fn new(lattice: Lattice, terms: Vec<Term>) -> Result<Self> {
        let n = lattice.dim();
        let mut zero = None;
        for (i, term) in terms.iter().enumerate() {
            if term.frequency.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: term.frequency.len(),
                });
            }
            if !term.coefficient.is_finite() || term.frequency.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
            if term.coefficient < 0.0 {
                return Err(Error::InvalidSeries("negative coefficient"));
            }
            if norm(&term.frequency) <= FREQUENCY_TOL {
                if zero.is_some() {
                    return Err(Error::InvalidSeries("more than one zero frequency"));
                }
                zero = Some(i);
            }
        }
        let zero = zero.ok_or(Error::InvalidSeries("missing zero frequency"))?;
        if !(terms[zero].coefficient > 0.0) {
            return Err(Error::InvalidSeries("c_0 must be positive"));
        }

        // Distinctness modulo sign: sort canonical representatives and compare
        // neighbours.
        let mut canon: Vec<Vec<f64>> = terms
            .iter()
            .map(|t| {
                let s = canonical_sign(&t.frequency);
                t.frequency.iter().map(|v| v * s).collect()
            })
            .collect();
        canon.sort_by(|a, b| lex_cmp(a, b));
        for w in canon.windows(2) {
            let d: f64 = w[0]
                .iter()
                .zip(&w[1])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if sqrt(d) <= FREQUENCY_TOL {
                return Err(Error::InvalidSeries("duplicate frequency (up to sign)"));
            }
        }

        let mut terms = terms;
        let z = terms.remove(zero);
        terms.insert(0, z);
        let dual_int = terms
            .iter()
            .map(|t| {
                lattice
                    .dual_coordinates(&t.frequency)
                    .into_iter()
                    .map(|c| {
                        let k = round(c);
                        (abs(c - k) <= EXACT_DUAL_TOL * (1.0 + abs(k)) && abs(k) < 1e15).then_some(k as i64)
                    })
                    .collect::<Option<Vec<i64>>>()
            })
            .collect::<Option<Vec<_>>>();
        Ok(CosineSeries {
            lattice,
            terms,
            dual_int,
        })
    }

    /// The constant function `c0`.
    pub fn constant(lattice: Lattice, c0: f64) -> Result<Self> {
        let n = lattice.dim();
        CosineSeries::new(lattice, vec![Term::new(vec![0.0; n], c0)])
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn c0(&self) -> f64 {
        self.terms[0].coefficient
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Phase of each nonzero term at `x`, in cycles and reduced to
    /// `[−1/2, 1/2]`.
    ///
    /// For dual-lattice frequencies the phase is `Σ_i k_i·y_i` with integer
    /// dual coordinates `k_i` and the reduced lattice coordinates `y_i` of
    /// `x`, accumulated without rounding error, so large `‖t‖·‖x‖` costs no
    /// accuracy.
    fn phases(&self, x: &[f64]) -> Vec<f64> {
        let Some(dual) = &self.dual_int else {
            return self.terms[1..]
                .iter()
                .map(|t| {
                    let p: f64 = t.frequency.iter().zip(x).map(|(a, b)| a * b).sum();
                    p - round(p)
                })
                .collect();
        };
        let y: Vec<f64> = self
            .lattice
            .coefficients(x)
            .into_iter()
            .map(|c| c - round(c))
            .collect();
        dual[1..]
            .iter()
            .map(|k| {
                let (mut hi, mut lo) = (0.0, 0.0);
                for (&ki, &yi) in k.iter().zip(&y) {
                    let kf = ki as f64;
                    let p = kf * yi;
                    let e = fma(kf, yi, -p);
                    let (s, t) = two_sum(hi, p);
                    hi = s - round(s);
                    lo += t + e;
                }
                let v = hi + lo;
                v - round(v)
            })
            .collect()
    }

    /// `g(x) = Σ c_t cos(2π t·x)`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let mut s = self.c0();
        for (term, phase) in self.terms[1..].iter().zip(self.phases(x)) {
            s += term.coefficient * cos_cycles(phase);
        }
        s
    }

    /// `g(x)` and `∇g(x)` (written into `grad`).
    pub fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut s = self.c0();
        for (term, phase) in self.terms[1..].iter().zip(self.phases(x)) {
            let (sn, cs) = sincos_cycles(phase);
            s += term.coefficient * cs;
            let w = -TAU * term.coefficient * sn;
            for (g, t) in grad.iter_mut().zip(&term.frequency) {
                *g += w * t;
            }
        }
        s
    }

    /// `ĝ(0)`, the integral over the fundamental cell: `c_0·|Λ_m|`.
    pub fn hat_zero(&self) -> f64 {
        self.c0() * self.lattice.determinant()
    }

    /// `g(0)/ĝ(0)`.
    pub fn sharp(&self) -> f64 {
        let g0: f64 = self.terms.iter().map(|t| t.coefficient).sum();
        g0 / self.hat_zero()
    }

    /// `Σ c_t·2π‖t‖`, a global Lipschitz constant of `g`.
    pub fn lipschitz_constant(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * TAU * norm(&t.frequency))
            .sum()
    }

    /// `Σ c_t·(2π‖t‖)²`, a bound on the spectral norm of the Hessian of `g`.
    pub fn curvature_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let w = TAU * norm(&t.frequency);
                t.coefficient * w * w
            })
            .sum()
    }

    /// The series `alpha·g`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter("scale factor must be positive"));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.frequency.clone(), t.coefficient * alpha))
            .collect();
        CosineSeries::new(self.lattice.clone(), terms)
    }

    /// Checks that every frequency has integer inner products with the
    /// generators of `Λ_m`, within `1e-9`.
    pub fn verify_dual_membership(&self) -> MembershipReport {
        let residuals: Vec<f64> = self
            .terms
            .iter()
            .map(|t| self.lattice.dual_residual(&t.frequency))
            .collect();
        MembershipReport {
            ok: residuals.iter().all(|&r| r <= MEMBERSHIP_TOL),
            residuals,
        }
    }

    /// `|g(x) − g(x + v)|` for a lattice vector `v ∈ Λ_m`.
    pub fn periodicity_residual(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        let n = self.dim();
        if x.len() != n || v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if x.len() != n { x.len() } else { v.len() },
            });
        }
        let residual = self.lattice.membership_residual(v);
        if !(residual <= MEMBERSHIP_TOL) {
            return Err(Error::VNotInLattice { residual });
        }
        let shifted: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + b).collect();
        Ok(abs(self.evaluate(x) - self.evaluate(&shifted)))
    }
}

/// Outcome of a grid certificate that `g ≤ tolerance` on `‖[x]‖ ≥ threshold`.
///
/// Two sound upper bounds on the supremum over the region are computed from
/// the same samples and the smaller one is reported as `certified_bound`:
///
/// * first order: `max g(x_j) + L·r` with the global Lipschitz constant `L`;
/// * second order: `max (g(x_j) + ‖∇g(x_j)‖·r + M·r²/2)` with the Hessian
///   bound `M`, which stays small near the zeros of `g` where the gradient
///   vanishes.
///
/// The maxima run over every sample whose quotient norm is at least
/// `threshold − r`, so each region point lies within `r` of a kept sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub threshold: f64,
    pub spacing: f64,
    pub covering_radius: f64,
    pub lipschitz: f64,
    pub curvature: f64,
    /// Largest sampled value over kept samples (`-∞` if none were kept).
    pub max_sample: f64,
    pub argmax: Option<Vec<f64>>,
    /// Largest sampled value over samples with quotient norm `≥ threshold`.
    pub region_max: f64,
    pub region_argmax: Option<Vec<f64>>,
    pub first_order_bound: f64,
    pub second_order_bound: f64,
    pub certified_bound: f64,
    pub samples: u64,
    pub kept: u64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Options for [`certify_nonpositive_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub tolerance: f64,
    /// Upper bound on the Euclidean covering radius of the sample grid.
    pub spacing: f64,
    pub threshold: f64,
    pub sample_cap: u64,
}

impl CertifyOptions {
    pub fn new(tolerance: f64, spacing: f64) -> Self {
        CertifyOptions {
            tolerance,
            spacing,
            threshold: 1.0,
            sample_cap: DEFAULT_SAMPLE_CAP,
        }
    }
}

/// Running maxima over a contiguous block of slabs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPartial {
    samples: u64,
    kept: u64,
    max_value: f64,
    argmax: Option<[f64; MAX_DIM]>,
    max_taylor: f64,
    region_max: f64,
    region_argmax: Option<[f64; MAX_DIM]>,
}

impl SweepPartial {
    fn empty() -> Self {
        SweepPartial {
            samples: 0,
            kept: 0,
            max_value: f64::NEG_INFINITY,
            argmax: None,
            max_taylor: f64::NEG_INFINITY,
            region_max: f64::NEG_INFINITY,
            region_argmax: None,
        }
    }

    /// Folds `later` into `self`. Ties keep the earlier argmax, so merging
    /// partials in slab order is deterministic.
    pub fn merge(&mut self, later: SweepPartial) {
        self.samples += later.samples;
        self.kept += later.kept;
        if later.max_value > self.max_value {
            self.max_value = later.max_value;
            self.argmax = later.argmax;
        }
        if later.max_taylor > self.max_taylor {
            self.max_taylor = later.max_taylor;
        }
        if later.region_max > self.region_max {
            self.region_max = later.region_max;
            self.region_argmax = later.region_argmax;
        }
    }
}

/// A cell-centred sample grid over the fundamental parallelepiped of the
/// series' lattice. The grid is split into slabs along the first generator so
/// callers can sweep slab ranges independently and merge the partials.
#[derive(Debug, Clone)]
pub struct CertificationGrid<'a> {
    series: &'a CosineSeries,
    options: CertifyOptions,
    divisions: [u64; MAX_DIM],
    radius: f64,
    lipschitz: f64,
    curvature: f64,
    neighbors: Vec<[f64; MAX_DIM]>,
    freqs: Vec<[f64; MAX_DIM]>,
    coeffs: Vec<f64>,
}

fn covering_radius(lattice: &Lattice, div: &[u64]) -> f64 {
    let n = lattice.dim();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let mut v = [0.0; MAX_DIM];
        for (j, &d) in div.iter().enumerate().take(n) {
            let s = if mask & (1 << j) != 0 { 0.5 } else { -0.5 };
            let col = lattice.scaled_column(j);
            for i in 0..n {
                v[i] += s * col[i] / d as f64;
            }
        }
        best = best.max(norm(&v[..n]));
    }
    best
}

impl<'a> CertificationGrid<'a> {
    pub fn new(series: &'a CosineSeries, options: CertifyOptions) -> Result<Self> {
        if !(options.spacing > 0.0) || !options.spacing.is_finite() {
            return Err(Error::InvalidParameter("grid spacing must be positive"));
        }
        if !(options.tolerance >= 0.0) {
            return Err(Error::InvalidParameter("tolerance must be nonnegative"));
        }
        let lattice = series.lattice();
        let n = lattice.dim();
        let h = options.spacing;

        let mut div = [1u64; MAX_DIM];
        for (j, d) in div.iter_mut().enumerate().take(n) {
            let len = norm(lattice.scaled_column(j));
            let want = ceil(len * sqrt(n as f64) / (2.0 * h));
            if want > options.sample_cap as f64 {
                return Err(Error::GridTooFine {
                    samples: want,
                    cap: options.sample_cap,
                });
            }
            *d = (want as u64).max(1);
        }
        let mut radius = covering_radius(lattice, &div[..n]);
        let mut guard = 0;
        while radius > h && guard < 64 {
            let factor = radius / h;
            for d in div.iter_mut().take(n) {
                *d = (ceil(*d as f64 * factor) as u64).max(*d + 1);
            }
            radius = covering_radius(lattice, &div[..n]);
            guard += 1;
        }
        let samples: f64 = div[..n].iter().map(|&d| d as f64).product();
        if samples > options.sample_cap as f64 {
            return Err(Error::GridTooFine {
                samples,
                cap: options.sample_cap,
            });
        }

        // Every lattice point within `threshold` of a cell point lies within
        // circumradius + threshold of the cell centre.
        let center = lattice.cell_center();
        let reach = lattice.cell_circumradius() + options.threshold + radius;
        let neighbors = lattice
            .enumerate_points(&center, reach)?
            .into_iter()
            .map(|p| {
                let mut a = [0.0; MAX_DIM];
                a[..n].copy_from_slice(&p.point);
                a
            })
            .collect();

        let mut freqs = Vec::with_capacity(series.terms.len() - 1);
        let mut coeffs = Vec::with_capacity(series.terms.len() - 1);
        for t in &series.terms[1..] {
            if t.coefficient == 0.0 {
                continue;
            }
            let mut a = [0.0; MAX_DIM];
            a[..n].copy_from_slice(&t.frequency);
            freqs.push(a);
            coeffs.push(t.coefficient);
        }

        Ok(CertificationGrid {
            series,
            options,
            divisions: div,
            radius,
            lipschitz: series.lipschitz_constant(),
            curvature: series.curvature_bound(),
            neighbors,
            freqs,
            coeffs,
        })
    }

    /// Number of slabs along the first generator.
    pub fn slabs(&self) -> u64 {
        self.divisions[0]
    }

    pub fn sample_count(&self) -> u64 {
        self.divisions[..self.series.dim()].iter().product()
    }

    pub fn covering_radius(&self) -> f64 {
        self.radius
    }

    /// Sweeps the samples in slabs `range` (first-generator indices).
    pub fn sweep(&self, range: Range<u64>) -> SweepPartial {
        let lattice = self.series.lattice();
        let n = lattice.dim();
        let r = self.radius;
        let keep_at = self.options.threshold - r;
        let keep2 = if keep_at > 0.0 { keep_at * keep_at } else { 0.0 };
        let thr2 = self.options.threshold * self.options.threshold;
        let taylor_pad = 0.5 * self.curvature * r * r;
        let c0 = self.series.c0();

        let mut out = SweepPartial::empty();
        let mut idx = [0u64; MAX_DIM];
        let mut y = [0.0; MAX_DIM];
        let mut x = [0.0; MAX_DIM];
        let mut grad = [0.0; MAX_DIM];
        for i0 in range {
            idx[0] = i0;
            for v in idx.iter_mut().take(n).skip(1) {
                *v = 0;
            }
            loop {
                for j in 0..n {
                    y[j] = (idx[j] as f64 + 0.5) / self.divisions[j] as f64;
                }
                lattice.from_coefficients_into(&y[..n], &mut x[..n]);

                let mut g = c0;
                grad[..n].iter_mut().for_each(|v| *v = 0.0);
                for (t, &c) in self.freqs.iter().zip(&self.coeffs) {
                    let mut phase = 0.0;
                    for i in 0..n {
                        phase += t[i] * x[i];
                    }
                    let (sn, cs) = sincos_cycles(phase);
                    g += c * cs;
                    let w = -TAU * c * sn;
                    for i in 0..n {
                        grad[i] += w * t[i];
                    }
                }
                let gnorm = norm(&grad[..n]);
                let taylor = g + gnorm * r + taylor_pad;

                let mut d2min = f64::INFINITY;
                for p in &self.neighbors {
                    let mut d2 = 0.0;
                    for i in 0..n {
                        let d = x[i] - p[i];
                        d2 += d * d;
                    }
                    if d2 < d2min {
                        d2min = d2;
                    }
                }
                out.samples += 1;
                if keep_at <= 0.0 || d2min >= keep2 {
                    out.kept += 1;
                    if g > out.max_value {
                        out.max_value = g;
                        out.argmax = Some(x);
                    }
                    if taylor > out.max_taylor {
                        out.max_taylor = taylor;
                    }
                    if d2min >= thr2 && g > out.region_max {
                        out.region_max = g;
                        out.region_argmax = Some(x);
                    }
                }

                // odometer over generators 1..n, last fastest
                let mut j = n;
                let mut done = true;
                while j > 1 {
                    j -= 1;
                    if idx[j] + 1 < self.divisions[j] {
                        idx[j] += 1;
                        done = false;
                        break;
                    }
                    idx[j] = 0;
                }
                if done {
                    break;
                }
            }
        }
        out
    }

    /// Combines partials (in slab order) into the final report.
    pub fn finish<I: IntoIterator<Item = SweepPartial>>(&self, partials: I) -> CertificationReport {
        let mut total = SweepPartial::empty();
        for p in partials {
            total.merge(p);
        }
        let n = self.series.dim();
        let r = self.radius;
        let first = total.max_value + self.lipschitz * r;
        let second = total.max_taylor;
        let certified = if first < second { first } else { second };
        CertificationReport {
            threshold: self.options.threshold,
            spacing: self.options.spacing,
            covering_radius: r,
            lipschitz: self.lipschitz,
            curvature: self.curvature,
            max_sample: total.max_value,
            argmax: total.argmax.map(|a| a[..n].to_vec()),
            region_max: total.region_max,
            region_argmax: total.region_argmax.map(|a| a[..n].to_vec()),
            first_order_bound: first,
            second_order_bound: second,
            certified_bound: certified,
            samples: total.samples,
            kept: total.kept,
            tolerance: self.options.tolerance,
            pass: certified <= self.options.tolerance,
        }
    }
}

/// Certifies `g ≤ tol` on `‖[x]‖ ≥ 1` with a grid of covering radius at most
/// `h`, sweeping serially.
pub fn certify_nonpositive(series: &CosineSeries, tol: f64, h: f64) -> Result<CertificationReport> {
    certify_nonpositive_with(series, CertifyOptions::new(tol, h))
}

pub fn certify_nonpositive_with(
    series: &CosineSeries,
    options: CertifyOptions,
) -> Result<CertificationReport> {
    let grid = CertificationGrid::new(series, options)?;
    let partial = grid.sweep(0..grid.slabs());
    Ok(grid.finish([partial]))
}

/// Mean of `g` over the fundamental cell times its volume, by the tensor
/// midpoint rule with `per_axis` points per generator. Exact for
/// trigonometric polynomials once `per_axis` exceeds the largest dual
/// coordinate of any frequency.
pub fn cell_integral_midpoint(series: &CosineSeries, per_axis: u64) -> f64 {
    let lattice = series.lattice();
    let n = lattice.dim();
    let mut idx = vec![0u64; n];
    let mut y = vec![0.0; n];
    let mut sum = 0.0;
    loop {
        for j in 0..n {
            y[j] = (idx[j] as f64 + 0.5) / per_axis as f64;
        }
        sum += series.evaluate(&lattice.from_coefficients(&y));
        let mut j = n;
        loop {
            if j == 0 {
                let total = (0..n).fold(1.0, |a, _| a * per_axis as f64);
                return sum / total * lattice.determinant();
            }
            j -= 1;
            if idx[j] + 1 < per_axis {
                idx[j] += 1;
                break;
            }
            idx[j] = 0;
        }
    }
}
