//! Dense two-phase simplex on a dictionary tableau with Bland's rule.
//!
//! Solves `minimize c·x subject to A·x ≤ b, x ≥ 0`. The tableau stores one
//! row per basic variable and one column per nonbasic variable, so a pivot
//! costs `O(rows · cols)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::abs;

pub const DEFAULT_PIVOT_CAP: u64 = 1_000_000;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    /// Objective to minimize, one entry per variable.
    pub cost: Vec<f64>,
    /// Constraint rows, each of length `cost.len()`.
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Primal point (meaningful when `status` is `Optimal`).
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: u64,
}

struct Tableau {
    /// `x_basic[i] = b[i] − Σ_j a[i][j]·x_nonbasic[j]`
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    /// `z = z0 + Σ_j d[j]·x_nonbasic[j]`, maximized.
    d: Vec<f64>,
    z0: f64,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    pivots: u64,
}

enum Run {
    Optimal,
    Unbounded,
    Limit,
}

impl Tableau {
    fn pivot(&mut self, r: usize, s: usize) {
        let p = self.a[r][s];
        let cols = self.nonbasic.len();
        // solve row r for the entering variable
        self.b[r] /= p;
        for j in 0..cols {
            if j != s {
                self.a[r][j] /= p;
            }
        }
        self.a[r][s] = 1.0 / p;
        let (br, row_r) = (self.b[r], self.a[r].clone());
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[s];
            if f == 0.0 {
                continue;
            }
            self.b[i] -= f * br;
            for j in 0..cols {
                if j != s {
                    row[j] -= f * row_r[j];
                }
            }
            row[s] = -f * row_r[s];
        }
        let f = self.d[s];
        if f != 0.0 {
            self.z0 += f * br;
            for j in 0..cols {
                if j != s {
                    self.d[j] -= f * row_r[j];
                }
            }
            self.d[s] = -f * row_r[s];
        }
        core::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
        self.pivots += 1;
    }

    fn entering(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (j, &dj) in self.d.iter().enumerate() {
            if dj > EPS && best.map_or(true, |b| self.nonbasic[j] < self.nonbasic[b]) {
                best = Some(j);
            }
        }
        best
    }

    fn leaving(&self, s: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.basic.len() {
            let a = self.a[i][s];
            if a <= EPS {
                continue;
            }
            let ratio = self.b[i] / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let tie = abs(ratio - br) <= EPS * (1.0 + abs(br));
                    if ratio < br && !tie || tie && self.basic[i] < self.basic[bi] {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn run(&mut self, cap: u64) -> Run {
        loop {
            let Some(s) = self.entering() else {
                return Run::Optimal;
            };
            let Some(r) = self.leaving(s) else {
                return Run::Unbounded;
            };
            if self.pivots >= cap {
                return Run::Limit;
            }
            self.pivot(r, s);
        }
    }
}

impl LinearProgram {
    pub fn new(cost: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let n = cost.len();
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: rhs.len(),
            });
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
        }
        let finite = cost.iter().chain(rhs.iter()).chain(rows.iter().flatten()).all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite);
        }
        Ok(LinearProgram { cost, rows, rhs })
    }

    pub fn solve(&self) -> LpResult {
        self.solve_capped(DEFAULT_PIVOT_CAP)
    }

    pub fn solve_capped(&self, cap: u64) -> LpResult {
        let n = self.cost.len();
        let m = self.rows.len();
        let aux = n + m;
        // equilibrate rows so positive row scalings give the same tableau
        let mut a = self.rows.clone();
        let mut b = self.rhs.clone();
        for (row, bi) in a.iter_mut().zip(b.iter_mut()) {
            let s = row.iter().fold(abs(*bi), |acc, v| acc.max(abs(*v)));
            if s > 0.0 {
                row.iter_mut().for_each(|v| *v /= s);
                *bi /= s;
            }
        }
        let mut t = Tableau {
            a,
            b,
            d: vec![0.0; n],
            z0: 0.0,
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            pivots: 0,
        };
        let done = |t: &Tableau, status: LpStatus| LpResult {
            status,
            x: vec![0.0; n],
            objective: f64::NAN,
            pivots: t.pivots,
        };

        // Phase 1: maximize −x_aux where x_aux relaxes every row.
        let worst = (0..m).min_by(|&i, &j| t.b[i].partial_cmp(&t.b[j]).unwrap());
        if let Some(r) = worst.filter(|&r| t.b[r] < 0.0) {
            for row in t.a.iter_mut() {
                row.push(-1.0);
            }
            t.nonbasic.push(aux);
            t.d = vec![0.0; n + 1];
            t.d[n] = -1.0;
            t.pivot(r, n);
            match t.run(cap) {
                Run::Optimal => {}
                Run::Limit => return done(&t, LpStatus::IterationLimit),
                Run::Unbounded => unreachable!("phase 1 objective is bounded by zero"),
            }
            if t.z0 < -EPS {
                return done(&t, LpStatus::Infeasible);
            }
            if let Some(r) = t.basic.iter().position(|&v| v == aux) {
                let s = (0..t.nonbasic.len())
                    .filter(|&j| abs(t.a[r][j]) > EPS)
                    .min_by_key(|&j| t.nonbasic[j]);
                match s {
                    Some(s) => t.pivot(r, s),
                    None => {
                        // the row is identically zero; drop it
                        t.a.remove(r);
                        t.b.remove(r);
                        t.basic.remove(r);
                    }
                }
            }
            if let Some(s) = t.nonbasic.iter().position(|&v| v == aux) {
                for row in t.a.iter_mut() {
                    row.remove(s);
                }
                t.nonbasic.remove(s);
            }
        }

        // Phase 2 objective (maximize −c·x) in terms of the current nonbasics.
        let cols = t.nonbasic.len();
        t.d = vec![0.0; cols];
        t.z0 = 0.0;
        for (j, &v) in t.nonbasic.iter().enumerate() {
            if v < n {
                t.d[j] -= self.cost[v];
            }
        }
        for (i, &v) in t.basic.iter().enumerate() {
            if v < n {
                let c = -self.cost[v];
                t.z0 += c * t.b[i];
                for j in 0..cols {
                    t.d[j] -= c * t.a[i][j];
                }
            }
        }
        let status = match t.run(cap) {
            Run::Optimal => LpStatus::Optimal,
            Run::Unbounded => return done(&t, LpStatus::Unbounded),
            Run::Limit => return done(&t, LpStatus::IterationLimit),
        };
        let mut x = vec![0.0; n];
        for (i, &v) in t.basic.iter().enumerate() {
            if v < n {
                x[v] = t.b[i].max(0.0);
            }
        }
        let objective = self.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpResult {
            status,
            x,
            objective,
            pivots: t.pivots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y st x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let lp = LinearProgram::new(
            vec![-3.0, -5.0],
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            vec![4.0, 12.0, 18.0],
        )
        .unwrap();
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective + 36.0).abs() < 1e-9);
        assert!((r.x[0] - 2.0).abs() < 1e-9 && (r.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn needs_phase_one() {
        // min x + y st x + y ≥ 2, x ≤ 3
        let lp = LinearProgram::new(
            vec![1.0, 1.0],
            vec![vec![-1.0, -1.0], vec![1.0, 0.0]],
            vec![-2.0, 3.0],
        )
        .unwrap();
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram::new(vec![1.0], vec![vec![1.0], vec![-1.0]], vec![1.0, -2.0]).unwrap();
        assert_eq!(lp.solve().status, LpStatus::Infeasible);
        let lp = LinearProgram::new(vec![-1.0, 0.0], vec![vec![-1.0, 1.0]], vec![1.0]).unwrap();
        assert_eq!(lp.solve().status, LpStatus::Unbounded);
    }

    #[test]
    fn iteration_limit_is_a_status() {
        let lp = LinearProgram::new(
            vec![-3.0, -5.0],
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            vec![4.0, 12.0, 18.0],
        )
        .unwrap();
        assert_eq!(lp.solve_capped(0).status, LpStatus::IterationLimit);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the largest-coefficient rule.
        let lp = LinearProgram::new(
            vec![-0.75, 150.0, -0.02, 6.0],
            vec![
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![0.0, 0.0, 1.0],
        )
        .unwrap();
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective + 0.05).abs() < 1e-9);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(LinearProgram::new(vec![1.0, 1.0], vec![vec![1.0]], vec![1.0]).is_err());
    }
}
