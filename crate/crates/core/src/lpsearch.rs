//! Discretized LP search for auxiliary functions.
//!
//! With `c_0 = 1` fixed, the LP is
//!
//! ```text
//! minimize    1 + Σ_{t≠0} c_t
//! subject to  Σ_{t≠0} c_t·cos(2π t·x_j) ≤ −1   for every constraint point x_j
//!             c_t ≥ 0
//! ```
//!
//! over one representative `t` per `±t` pair of dual-lattice points with
//! `‖t‖ ≤ R`. [`refine`] adds cutting planes at the worst point found by the
//! grid certifier.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::auxfn::{certify_nonpositive, CertificationReport, CosineSeries, Term};
use crate::bounds::{BoundKind, DensityBound, Provenance};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::math::{ceil, cos_cycles, dot, norm, powf};
use crate::simplex::{LinearProgram, LpStatus, DEFAULT_PIVOT_CAP};
use crate::MAX_DIM;

/// Constraint points must have quotient norm at least `1 − REGION_TOL`.
pub const REGION_TOL: f64 = 1e-12;

/// Feasibility slack allowed when checking a returned solution.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// Cap on constraint-grid vertices.
pub const DEFAULT_GRID_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchProblem {
    pub lattice: Lattice,
    /// Zero frequency first, then by increasing norm.
    pub frequencies: Vec<Vec<f64>>,
    pub points: Vec<Vec<f64>>,
    /// Set when the grid produced no constraint point.
    pub empty_constraints: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// Aligned with `SearchProblem::frequencies`; `coefficients[0] = 1`.
    pub coefficients: Vec<f64>,
    /// `g(0)/c_0 = Σ c_t`.
    pub objective: f64,
    pub status: LpStatus,
    pub iterations: u64,
}

impl LpSolution {
    /// The solution as a cosine series; `None` unless optimal.
    pub fn series(&self, problem: &SearchProblem) -> Option<CosineSeries> {
        if self.status != LpStatus::Optimal {
            return None;
        }
        let terms = problem
            .frequencies
            .iter()
            .zip(&self.coefficients)
            .map(|(t, &c)| Term::new(t.clone(), c))
            .collect();
        CosineSeries::new(problem.lattice.clone(), terms).ok()
    }

    /// Largest constraint violation `max_j (1 + Σ c_t cos(2π t·x_j))`.
    pub fn max_violation(&self, problem: &SearchProblem) -> f64 {
        problem
            .points
            .iter()
            .map(|x| {
                problem
                    .frequencies
                    .iter()
                    .zip(&self.coefficients)
                    .map(|(t, c)| c * cos_cycles(dot(t, x)))
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn canonical_positive(coeffs: &[i64]) -> bool {
    match coeffs.iter().find(|&&c| c != 0) {
        Some(&c) => c > 0,
        None => true,
    }
}

/// Dual-lattice frequencies with `‖t‖ ≤ radius`, one per `±` pair.
pub fn frequency_set(lattice: &Lattice, radius: f64) -> Result<Vec<Vec<f64>>> {
    let dual = lattice.dual()?;
    let origin = vec![0.0; lattice.dim()];
    let mut pts: Vec<(f64, Vec<i64>, Vec<f64>)> = dual
        .enumerate_points(&origin, radius)?
        .into_iter()
        .filter(|p| canonical_positive(&p.coeffs))
        .map(|p| (norm(&p.point), p.coeffs, p.point))
        .collect();
    pts.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.1.cmp(&b.1))
    });
    Ok(pts.into_iter().map(|p| p.2).collect())
}

/// Shortest nonzero dual norm times 1.05: the radius that keeps exactly the
/// shortest `±` pairs.
pub fn auto_radius(lattice: &Lattice) -> Result<f64> {
    Ok(1.05 * lattice.dual()?.shortest_vector_norm()?)
}

/// Builds the LP data: frequencies up to `radius` and the region points of
/// a vertex grid over the fundamental cell.
///
/// Generator `k` is split into `N_k` steps with `N_k ≥ ‖m·b_k‖/h` a multiple
/// of `m`, so the grid contains every point of `Λ/Λ_m`.
pub fn build_problem(lattice: &Lattice, radius: f64, h: f64) -> Result<SearchProblem> {
    if !(radius > 0.0) || !(h > 0.0) {
        return Err(Error::InvalidParameter("radius and grid spacing must be positive"));
    }
    let n = lattice.dim();
    let frequencies = frequency_set(lattice, radius)?;
    if frequencies.len() < 2 {
        return Err(Error::EmptyFrequencySet);
    }

    let m = lattice.scale() as u64;
    let div: Vec<u64> = (0..n)
        .map(|k| {
            let steps = (ceil(norm(lattice.scaled_column(k)) / h) as u64).max(1);
            steps.div_ceil(m) * m
        })
        .collect();
    let total: f64 = div.iter().map(|&d| d as f64).product();
    if total > DEFAULT_GRID_CAP as f64 {
        return Err(Error::GridTooFine {
            samples: total,
            cap: DEFAULT_GRID_CAP,
        });
    }

    // lattice points that can be nearest to some point of the cell
    let center = lattice.cell_center();
    let reach = 2.0 * lattice.cell_circumradius();
    let neighbors: Vec<Vec<f64>> = lattice
        .enumerate_points(&center, reach)?
        .into_iter()
        .map(|p| p.point)
        .collect();
    let thr2 = powf(1.0 - REGION_TOL, 2.0);

    let mut points = Vec::new();
    let mut idx = vec![0u64; n];
    let mut y = [0.0; MAX_DIM];
    let mut x = [0.0; MAX_DIM];
    'grid: loop {
        for k in 0..n {
            y[k] = idx[k] as f64 / div[k] as f64;
        }
        lattice.from_coefficients_into(&y[..n], &mut x[..n]);
        let d2 = neighbors
            .iter()
            .map(|p| p.iter().zip(&x[..n]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if d2 >= thr2 {
            points.push(x[..n].to_vec());
        }
        let mut k = n;
        loop {
            if k == 0 {
                break 'grid;
            }
            k -= 1;
            if idx[k] + 1 < div[k] {
                idx[k] += 1;
                break;
            }
            idx[k] = 0;
        }
    }

    Ok(SearchProblem {
        lattice: lattice.clone(),
        empty_constraints: points.is_empty(),
        frequencies,
        points,
    })
}

impl SearchProblem {
    pub fn linear_program(&self) -> LinearProgram {
        let vars = self.frequencies.len() - 1;
        let rows: Vec<Vec<f64>> = self
            .points
            .iter()
            .map(|x| {
                self.frequencies[1..]
                    .iter()
                    .map(|t| cos_cycles(dot(t, x)))
                    .collect()
            })
            .collect();
        let rhs = vec![-1.0; rows.len()];
        LinearProgram {
            cost: vec![1.0; vars],
            rows,
            rhs,
        }
    }

    /// Appends a constraint point.
    pub fn add_point(&mut self, x: Vec<f64>) {
        self.points.push(x);
        self.empty_constraints = false;
    }
}

pub fn solve(problem: &SearchProblem) -> LpSolution {
    solve_capped(problem, DEFAULT_PIVOT_CAP)
}

pub fn solve_capped(problem: &SearchProblem, cap: u64) -> LpSolution {
    let r = problem.linear_program().solve_capped(cap);
    let mut coefficients = Vec::with_capacity(problem.frequencies.len());
    coefficients.push(1.0);
    coefficients.extend_from_slice(&r.x);
    let objective = if r.status == LpStatus::Optimal {
        1.0 + r.objective
    } else {
        f64::NAN
    };
    LpSolution {
        coefficients,
        objective,
        status: r.status,
        iterations: r.pivots,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefineOutcome {
    pub problem: SearchProblem,
    pub solution: LpSolution,
    /// Certificate of the last solution examined; `None` when no round ran.
    pub report: Option<CertificationReport>,
    pub rounds: u32,
}

/// Cutting-plane loop: certify the solution on a grid of covering radius
/// `spacing`; while the certified bound exceeds `tol` and the worst region
/// sample is positive, add it as a constraint and re-solve.
pub fn refine(
    problem: SearchProblem,
    solution: LpSolution,
    rounds: u32,
    tol: f64,
    spacing: f64,
) -> Result<RefineOutcome> {
    let mut out = RefineOutcome {
        problem,
        solution,
        report: None,
        rounds: 0,
    };
    for _ in 0..rounds {
        let Some(series) = out.solution.series(&out.problem) else {
            break;
        };
        let report = certify_nonpositive(&series, tol, spacing)?;
        out.rounds += 1;
        let cut = match (&report.region_argmax, report.pass) {
            (Some(x), false) if report.region_max > 0.0 => Some(x.clone()),
            _ => None,
        };
        out.report = Some(report);
        let Some(x) = cut else {
            break;
        };
        out.problem.add_point(x);
        out.solution = solve(&out.problem);
    }
    Ok(out)
}

/// `δ ≤ objective / (2ⁿ·|Λ_m|)`, flagged per-m.
pub fn bound_from_solution(solution: &LpSolution, lattice: &Lattice, source: &str) -> DensityBound {
    DensityBound::from_sharp(
        lattice.dim(),
        solution.objective / lattice.determinant(),
        Provenance {
            source: alloc::string::String::from(source),
            ms: vec![lattice.scale()],
            kind: BoundKind::PerM,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::hex_lattice;

    #[test]
    fn one_dim_frequency_set() {
        let l = Lattice::integer(1, 3).unwrap();
        let s = frequency_set(&l, 0.7).unwrap();
        assert_eq!(s.len(), 3);
        for (t, k) in s.iter().zip([0.0, 1.0, 2.0]) {
            assert!((t[0] - k / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hex_frequency_set() {
        let l = hex_lattice(2).unwrap();
        let r = auto_radius(&l).unwrap();
        let s = frequency_set(&l, r).unwrap();
        assert_eq!(s.len(), 4);
        for t in &s[1..] {
            assert!((norm(t) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn one_dim_lp_optimum() {
        let l = Lattice::integer(1, 3).unwrap();
        let p = build_problem(&l, 0.7, 1e-3).unwrap();
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-8);
        assert!(s.max_violation(&p) <= FEASIBILITY_TOL);
        let b = bound_from_solution(&s, &l, "lp");
        assert!((b.delta - 0.5).abs() < 1e-8);
    }

    #[test]
    fn hex_lp_optimum() {
        let l = hex_lattice(2).unwrap();
        let p = build_problem(&l, auto_radius(&l).unwrap(), 0.01).unwrap();
        let s = solve(&p);
        assert!((s.objective - 4.0).abs() < 1e-8, "{}", s.objective);
        let b = bound_from_solution(&s, &l, "lp");
        assert!((b.delta - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-8);
    }

    #[test]
    fn region_free_torus_has_no_constraints() {
        // ℝ/ℤ never reaches quotient norm 1
        let l = Lattice::integer(1, 1).unwrap();
        let p = build_problem(&l, 1.5, 0.01).unwrap();
        assert!(p.empty_constraints);
        let s = solve(&p);
        assert_eq!(s.objective, 1.0);
    }

    #[test]
    fn empty_frequency_set() {
        let l = Lattice::integer(1, 3).unwrap();
        assert_eq!(build_problem(&l, 0.1, 0.01), Err(Error::EmptyFrequencySet));
    }

    #[test]
    fn zero_rounds_is_identity() {
        let l = Lattice::integer(1, 3).unwrap();
        let p = build_problem(&l, 0.7, 0.2).unwrap();
        let s = solve(&p);
        let out = refine(p.clone(), s.clone(), 0, 1e-6, 1e-4).unwrap();
        assert_eq!(out.problem, p);
        assert_eq!(out.solution, s);
        assert!(out.report.is_none());
    }
}
