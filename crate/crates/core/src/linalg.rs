//! Small dense square matrices (n ≤ 8), column-major.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, sqrt};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub(crate) fn from_columns(cols: &[Vec<f64>]) -> Self {
        let n = cols.len();
        let mut data = Vec::with_capacity(n * n);
        for c in cols {
            data.extend_from_slice(c);
        }
        Mat { n, data }
    }

    #[inline]
    pub(crate) fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.n + row]
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize, v: f64) {
        self.data[col * self.n + row] = v;
    }

    pub(crate) fn column(&self, col: usize) -> &[f64] {
        &self.data[col * self.n..(col + 1) * self.n]
    }

    pub(crate) fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|j| self.column(j).to_vec()).collect()
    }

    pub(crate) fn scaled(&self, s: f64) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub(crate) fn transpose(&self) -> Mat {
        let mut t = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(i, j, self.get(j, i));
            }
        }
        t
    }

    /// `out = self · v`
    #[inline]
    pub(crate) fn mul_vec_into(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n;
        out[..n].iter_mut().for_each(|o| *o = 0.0);
        for (j, &vj) in v.iter().enumerate().take(n) {
            let col = self.column(j);
            for i in 0..n {
                out[i] += col[i] * vj;
            }
        }
    }

    pub(crate) fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.mul_vec_into(v, &mut out);
        out
    }

    /// Determinant by LU with partial pivoting.
    pub(crate) fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.clone();
        let mut det = 1.0;
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if abs(a.get(i, k)) > abs(a.get(p, k)) {
                    p = i;
                }
            }
            if a.get(p, k) == 0.0 {
                return 0.0;
            }
            if p != k {
                for j in 0..n {
                    let t = a.get(k, j);
                    a.set(k, j, a.get(p, j));
                    a.set(p, j, t);
                }
                det = -det;
            }
            let piv = a.get(k, k);
            det *= piv;
            for i in k + 1..n {
                let f = a.get(i, k) / piv;
                for j in k..n {
                    a.set(i, j, a.get(i, j) - f * a.get(k, j));
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub(crate) fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if abs(a.get(i, k)) > abs(a.get(p, k)) {
                    p = i;
                }
            }
            if a.get(p, k) == 0.0 {
                return None;
            }
            for j in 0..n {
                let t = a.get(k, j);
                a.set(k, j, a.get(p, j));
                a.set(p, j, t);
                let t = inv.get(k, j);
                inv.set(k, j, inv.get(p, j));
                inv.set(p, j, t);
            }
            let piv = a.get(k, k);
            for j in 0..n {
                a.set(k, j, a.get(k, j) / piv);
                inv.set(k, j, inv.get(k, j) / piv);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a.get(i, k);
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - f * a.get(k, j));
                    inv.set(i, j, inv.get(i, j) - f * inv.get(k, j));
                }
            }
        }
        Some(inv)
    }

    pub(crate) fn identity(n: usize) -> Mat {
        let mut m = Mat {
            n,
            data: vec![0.0; n * n],
        };
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Largest singular value, by power iteration on `AᵀA` until the
    /// relative change drops below `tol`.
    pub(crate) fn operator_norm(&self, tol: f64) -> f64 {
        let n = self.n;
        let at = self.transpose();
        // Start from the all-ones direction plus a small tilt so it is never
        // orthogonal to the dominant singular vector of a structured matrix.
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
        let mut sigma2 = 0.0;
        let mut av = vec![0.0; n];
        let mut w = vec![0.0; n];
        for _ in 0..10_000 {
            let nv = sqrt(v.iter().map(|x| x * x).sum());
            v.iter_mut().for_each(|x| *x /= nv);
            self.mul_vec_into(&v, &mut av);
            at.mul_vec_into(&av, &mut w);
            let next = sqrt(w.iter().map(|x| x * x).sum());
            let done = abs(next - sigma2) <= tol * next;
            sigma2 = next;
            core::mem::swap(&mut v, &mut w);
            if done {
                break;
            }
        }
        sqrt(sigma2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn det_and_inverse_of_skew_matrix() {
        let m = Mat::from_columns(&[vec![2.0, 0.0], vec![1.0, 3.0f64.sqrt()]]);
        assert!((m.det() - 2.0 * 3.0f64.sqrt()).abs() < 1e-14);
        let inv = m.inverse().unwrap();
        let x = m.mul_vec(&inv.mul_vec(&[0.3, -1.7]));
        assert!((x[0] - 0.3).abs() < 1e-14 && (x[1] + 1.7).abs() < 1e-14);
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let m = Mat::from_columns(&[vec![3.0, 0.0, 0.0], vec![0.0, -5.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!((m.operator_norm(1e-12) - 5.0).abs() < 1e-8);
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Mat::from_columns(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(m.det(), 0.0);
        assert!(m.inverse().is_none());
    }
}
