use proptest::prelude::*;
use spherelp_core::constructions::hex_lattice;
use spherelp_core::lpsearch::*;
use spherelp_core::simplex::{LinearProgram, LpStatus};
use spherelp_core::Lattice;

/// Minimum of `c·x` over `{A x ≤ b, x ≥ 0}` by enumerating every vertex:
/// each choice of `n` active constraints among the rows and the bounds.
fn vertex_oracle(lp: &LinearProgram) -> Option<f64> {
    let n = lp.cost.len();
    let mut rows: Vec<(Vec<f64>, f64)> = lp.rows.iter().cloned().zip(lp.rhs.iter().cloned()).collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = -1.0;
        rows.push((e, 0.0));
    }
    let mut best: Option<f64> = None;
    let total = rows.len();
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        if let Some(x) = solve_square(&pick.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>()) {
            let feasible = rows
                .iter()
                .all(|(a, b)| a.iter().zip(&x).map(|(u, v)| u * v).sum::<f64>() <= b + 1e-9);
            if feasible {
                let v: f64 = lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < total - n + i {
                pick[i] += 1;
                for j in i + 1..n {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn solve_square(rows: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.iter().map(|(r, b)| {
        let mut r = r.clone();
        r.push(*b);
        r
    }).collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
        if a[p][k].abs() < 1e-12 {
            return None;
        }
        a.swap(k, p);
        for i in 0..n {
            if i != k {
                let f = a[i][k] / a[k][k];
                for j in k..=n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn sub_problem(p: &SearchProblem, stride: usize) -> SearchProblem {
    let mut q = p.clone();
    q.points = p.points.iter().step_by(stride).take(40).cloned().collect();
    q
}

#[test]
fn one_dim_cutting_planes_reach_m() {
    for m in 3..=5u32 {
        let l = Lattice::integer(1, m).unwrap();
        let radius = (m as f64 - 1.5) / m as f64;
        let p = build_problem(&l, radius, 0.2).unwrap();
        assert_eq!(p.frequencies.len(), m as usize - 1);
        let s = solve(&p);
        let out = refine(p, s, 20, 1e-6, 1e-4).unwrap();
        assert_eq!(out.solution.status, LpStatus::Optimal);
        assert!((out.solution.objective - m as f64).abs() < 1e-6, "m={m}");
        assert!(out.solution.max_violation(&out.problem) <= FEASIBILITY_TOL);
    }
}

#[test]
fn one_dim_m5_fine_grid() {
    let l = Lattice::integer(1, 5).unwrap();
    let p = build_problem(&l, 0.7, 1e-3).unwrap();
    assert_eq!(p.frequencies.len(), 4);
    let s = solve(&p);
    assert!((s.objective - 5.0).abs() < 1e-7);
}

#[test]
fn hex_four_frequency_problem() {
    let l = hex_lattice(2).unwrap();
    let p = build_problem(&l, auto_radius(&l).unwrap(), 0.01).unwrap();
    assert_eq!(p.frequencies.len(), 4);
    let s = solve(&p);
    assert!((s.objective - 4.0).abs() < 1e-6);
    assert!(s.max_violation(&p) <= FEASIBILITY_TOL);
}

#[test]
fn simplex_matches_vertex_oracle() {
    let cases = [
        (Lattice::integer(1, 3).unwrap(), 0.7, 0.05),
        (Lattice::integer(1, 4).unwrap(), 0.8, 0.05),
        (Lattice::integer(1, 5).unwrap(), 0.7, 0.05),
        (hex_lattice(2).unwrap(), 0.61, 0.1),
    ];
    for (l, r, h) in cases {
        let full = build_problem(&l, r, h).unwrap();
        for stride in [1, 2, 3, 7] {
            let p = sub_problem(&full, stride);
            let lp = p.linear_program();
            assert!(lp.cost.len() <= 3 && lp.rows.len() <= 40);
            let s = lp.solve();
            match vertex_oracle(&lp) {
                Some(v) => {
                    assert_eq!(s.status, LpStatus::Optimal);
                    assert!((s.objective - v).abs() < 1e-4, "{} vs {v}", s.objective);
                }
                None => assert_ne!(s.status, LpStatus::Optimal),
            }
        }
    }
}

#[test]
fn solver_is_deterministic() {
    let l = hex_lattice(2).unwrap();
    let p = build_problem(&l, auto_radius(&l).unwrap(), 0.02).unwrap();
    let a = solve(&p);
    let b = solve(&p);
    assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
    assert_eq!(a.iterations, b.iterations);
}

#[test]
fn objective_nondecreasing_under_cuts() {
    let l = Lattice::integer(1, 4).unwrap();
    let mut p = build_problem(&l, 0.8, 0.5).unwrap();
    let mut last = solve(&p).objective;
    for x in [1.3, 2.3, 2.7, 1.1, 2.9, 1.05] {
        p.add_point(vec![x]);
        let s = solve(&p);
        assert!(s.objective >= last - 1e-12);
        last = s.objective;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_scaling_keeps_argmin(scales in prop::collection::vec(0.01f64..100.0, 40)) {
        let l = Lattice::integer(1, 4).unwrap();
        let p = sub_problem(&build_problem(&l, 0.8, 0.05).unwrap(), 2);
        let lp = p.linear_program();
        let mut scaled = lp.clone();
        for (i, (row, b)) in scaled.rows.iter_mut().zip(scaled.rhs.iter_mut()).enumerate() {
            let s = scales[i % scales.len()];
            row.iter_mut().for_each(|v| *v *= s);
            *b *= s;
        }
        let a = lp.solve();
        let b = scaled.solve();
        for (x, y) in a.x.iter().zip(&b.x) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}
