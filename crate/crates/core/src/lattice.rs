//! Full-rank lattices `Λ` and their integer scalings `Λ_m = mΛ`.
//!
//! A [`Lattice`] stores the unscaled basis `B` (columns `v_1..v_n`) and the
//! scale `m`; every operation acts on `Λ_m`, generated by the columns of
//! `mB`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::math::{abs, ceil, floor, norm, round, sqrt};
use crate::MAX_DIM;

/// Default cap on the number of coefficient vectors visited by
/// [`Lattice::enumerate_points`].
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

/// Absolute tolerance for structural identities (duality, membership of
/// exact lattice vectors).
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Tolerance for lattice or dual-lattice membership of user-supplied vectors.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    n: usize,
    m: u32,
    basis: Mat,
    scaled: Mat,
    inv_scaled: Mat,
    det: f64,
    inv_norm: f64,
}

/// A lattice vector together with its integer coordinates in the `mB` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint {
    pub coeffs: Vec<i64>,
    pub point: Vec<f64>,
}

/// Distance from `x` to `Λ_m`, with the translate `u ∈ x + Λ_m` realizing it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientNorm {
    pub value: f64,
    pub witness: Vec<f64>,
}

fn check_finite(x: &[f64]) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

impl Lattice {
    /// Builds `Λ_m` from the column vectors of `B` and the scale `m`.
    pub fn new(basis: &[Vec<f64>], m: u32) -> Result<Self> {
        let n = basis.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        if m == 0 {
            return Err(Error::InvalidScale);
        }
        for v in basis {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            check_finite(v)?;
        }
        let b = Mat::from_columns(basis);
        let det_b = b.det();
        let scale: f64 = basis.iter().map(|v| norm(v)).product();
        if !(abs(det_b) >= 1e-12 * scale) || scale == 0.0 {
            return Err(Error::SingularBasis { det: det_b });
        }
        let scaled = b.scaled(m as f64);
        let inv_scaled = scaled
            .inverse()
            .ok_or(Error::SingularBasis { det: det_b })?;
        let inv_norm = inv_scaled.operator_norm(1e-10);
        let det = abs(det_b) * (0..n).fold(1.0, |acc, _| acc * m as f64);
        Ok(Lattice {
            n,
            m,
            basis: b,
            scaled,
            inv_scaled,
            det,
            inv_norm,
        })
    }

    /// `ℤⁿ` scaled by `m`.
    pub fn integer(n: usize, m: u32) -> Result<Self> {
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Lattice::new(&cols, m)
    }

    /// The same base lattice at a different scale.
    pub fn with_scale(&self, m: u32) -> Result<Self> {
        Lattice::new(&self.basis.columns(), m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> u32 {
        self.m
    }

    /// Columns of the unscaled basis `B`.
    pub fn basis(&self) -> Vec<Vec<f64>> {
        self.basis.columns()
    }

    /// Columns of `mB`, the generators of `Λ_m`.
    pub fn scaled_basis(&self) -> Vec<Vec<f64>> {
        self.scaled.columns()
    }

    pub(crate) fn scaled_column(&self, j: usize) -> &[f64] {
        self.scaled.column(j)
    }

    /// Volume of the fundamental parallelepiped of `Λ_m`, `mⁿ·|det B|`.
    pub fn determinant(&self) -> f64 {
        self.det
    }

    /// `|det B|`, the covolume of the unscaled lattice.
    pub fn base_determinant(&self) -> f64 {
        abs(self.basis.det())
    }

    /// Spectral norm of `(mB)⁻¹`.
    pub fn inverse_operator_norm(&self) -> f64 {
        self.inv_norm
    }

    /// Basis of the dual lattice `Λ_m*`: the columns of `(mB)⁻ᵀ`.
    pub fn dual_basis(&self) -> Vec<Vec<f64>> {
        self.inv_scaled.transpose().columns()
    }

    /// `Λ_m*` as a lattice of its own (scale 1).
    pub fn dual(&self) -> Result<Lattice> {
        Lattice::new(&self.dual_basis(), 1)
    }

    /// Coordinates of `x` in the `mB` basis.
    pub fn coefficients(&self, x: &[f64]) -> Vec<f64> {
        self.inv_scaled.mul_vec(x)
    }

    /// The lattice vector `mB·k`.
    pub fn point(&self, k: &[i64]) -> Vec<f64> {
        let kf: Vec<f64> = k.iter().map(|&v| v as f64).collect();
        self.scaled.mul_vec(&kf)
    }

    /// `mB·y` for real coordinates `y`.
    pub fn from_coefficients(&self, y: &[f64]) -> Vec<f64> {
        self.scaled.mul_vec(y)
    }

    pub(crate) fn from_coefficients_into(&self, y: &[f64], out: &mut [f64]) {
        self.scaled.mul_vec_into(y, out);
    }

    /// Largest distance of a coordinate of `(mB)⁻¹v` from the nearest
    /// integer; zero for exact lattice vectors.
    pub fn membership_residual(&self, v: &[f64]) -> f64 {
        self.coefficients(v)
            .iter()
            .map(|c| abs(c - round(*c)))
            .fold(0.0, f64::max)
    }

    /// Largest distance of `⟨mB·e_i, t⟩` from the nearest integer; zero for
    /// exact dual-lattice vectors.
    pub fn dual_residual(&self, t: &[f64]) -> f64 {
        self.dual_coordinates(t)
            .iter()
            .map(|c| abs(c - round(*c)))
            .fold(0.0, f64::max)
    }

    /// Inner products of `t` with the generators of `Λ_m`, i.e. the
    /// coordinates of `t` in the dual basis.
    pub fn dual_coordinates(&self, t: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| {
                self.scaled
                    .column(j)
                    .iter()
                    .zip(t)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// All `t ∈ Λ_m` with `‖t − center‖₂ ≤ radius`, in lexicographic order of
    /// their integer coordinates.
    pub fn enumerate_points(&self, center: &[f64], radius: f64) -> Result<Vec<LatticePoint>> {
        self.enumerate_points_capped(center, radius, DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_points_capped(
        &self,
        center: &[f64],
        radius: f64,
        cap: u64,
    ) -> Result<Vec<LatticePoint>> {
        let n = self.n;
        if center.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: center.len(),
            });
        }
        check_finite(center)?;
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter("radius must be finite and nonnegative"));
        }
        // ‖k − (mB)⁻¹c‖ ≤ ‖(mB)⁻¹‖·‖t − c‖, so each coordinate lies in a
        // window of half-width ‖(mB)⁻¹‖·radius around (mB)⁻¹c.
        let y = self.coefficients(center);
        let reach = self.inv_norm * (1.0 + 1e-9) * radius + 1e-9;
        let mut lo = [0i64; MAX_DIM];
        let mut hi = [0i64; MAX_DIM];
        let mut count = 1.0f64;
        for i in 0..n {
            lo[i] = ceil(y[i] - reach) as i64;
            hi[i] = floor(y[i] + reach) as i64;
            if hi[i] < lo[i] {
                return Ok(Vec::new());
            }
            count *= (hi[i] - lo[i] + 1) as f64;
        }
        if count > cap as f64 {
            return Err(Error::RadiusTooLarge {
                candidates: count,
                cap,
            });
        }
        let r2 = radius * radius;
        let slack = 1e-12 * (1.0 + r2);
        let mut out = Vec::new();
        let mut k = lo;
        let mut p = [0.0; MAX_DIM];
        loop {
            let mut d2 = 0.0;
            for i in 0..n {
                let mut s = 0.0;
                for j in 0..n {
                    s += self.scaled.get(i, j) * k[j] as f64;
                }
                p[i] = s;
                let d = s - center[i];
                d2 += d * d;
            }
            if d2 <= r2 + slack {
                out.push(LatticePoint {
                    coeffs: k[..n].to_vec(),
                    point: p[..n].to_vec(),
                });
            }
            // odometer, last coordinate fastest
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if k[i] < hi[i] {
                    k[i] += 1;
                    break;
                }
                k[i] = lo[i];
            }
        }
    }

    /// Distance from `x` to the nearest point of `Λ_m`.
    ///
    /// Rounds the coordinates of `x` to get a feasible translate `u₀`, then
    /// enumerates every lattice point within `‖u₀‖` of `x`.
    pub fn quotient_norm(&self, x: &[f64]) -> Result<QuotientNorm> {
        let n = self.n;
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        check_finite(x)?;
        let y = self.coefficients(x);
        let k0: Vec<f64> = y.iter().map(|c| round(*c)).collect();
        let t0 = self.from_coefficients(&k0);
        let u0: Vec<f64> = x.iter().zip(&t0).map(|(a, b)| a - b).collect();
        let r = norm(&u0);
        let mut best = QuotientNorm {
            value: r,
            witness: u0,
        };
        if r == 0.0 {
            return Ok(best);
        }
        for lp in self.enumerate_points(x, r)? {
            let u: Vec<f64> = x.iter().zip(&lp.point).map(|(a, b)| a - b).collect();
            let d = norm(&u);
            if d < best.value {
                best = QuotientNorm { value: d, witness: u };
            }
        }
        Ok(best)
    }

    /// The representative of `x + Λ_m` whose `mB`-coordinates lie in `[0, 1)`.
    pub fn reduce_to_fundamental(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        check_finite(x)?;
        let y = self.coefficients(x);
        let shift: Vec<f64> = y
            .iter()
            .map(|&c| {
                let f = floor(c);
                // coordinates a hair below an integer are rounding noise
                if c - f > 1.0 - STRUCTURAL_TOL {
                    f + 1.0
                } else {
                    f
                }
            })
            .collect();
        let t = self.from_coefficients(&shift);
        Ok(x.iter().zip(&t).map(|(a, b)| a - b).collect())
    }

    /// Centre of the fundamental parallelepiped `mB·[0,1)ⁿ`.
    pub fn cell_center(&self) -> Vec<f64> {
        self.from_coefficients(&vec![0.5; self.n])
    }

    /// Largest distance from [`Self::cell_center`] to a vertex of the
    /// fundamental parallelepiped.
    pub fn cell_circumradius(&self) -> f64 {
        let n = self.n;
        let mut best = 0.0f64;
        for mask in 0u32..(1 << n) {
            let half: Vec<f64> = (0..n)
                .map(|j| if mask & (1 << j) != 0 { 0.5 } else { -0.5 })
                .collect();
            best = best.max(norm(&self.from_coefficients(&half)));
        }
        best
    }

    /// Length of a shortest nonzero vector of `Λ_m`.
    pub fn shortest_vector_norm(&self) -> Result<f64> {
        let origin = vec![0.0; self.n];
        let bound = (0..self.n)
            .map(|j| norm(self.scaled.column(j)))
            .fold(f64::INFINITY, f64::min);
        let pts = self.enumerate_points(&origin, bound)?;
        Ok(pts
            .iter()
            .map(|p| norm(&p.point))
            .filter(|&d| d > 0.0)
            .fold(bound, f64::min))
    }
}

/// Euclidean length; re-exported for callers that work with raw slices.
pub fn euclidean_norm(v: &[f64]) -> f64 {
    norm(v)
}

pub(crate) fn sqrt3() -> f64 {
    sqrt(3.0)
}
