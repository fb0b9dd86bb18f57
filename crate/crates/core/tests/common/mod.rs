//! Shared test support: independent brute-force oracles.
//!
//! Nothing here touches the solver paths under test; the QP oracles run on
//! dense nalgebra factorizations, and the quadrature/steady-state helpers
//! use textbook methods.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

use lasermpc::qp::QpProblem;

/// One-sided form of a two-sided QP row.
#[derive(Clone, Copy)]
struct OneSided {
    row: usize,
    /// +1 encodes aᵀx ≤ u, −1 encodes −aᵀx ≤ −l.
    sign: f64,
    bound: f64,
}

fn dense_a(problem: &QpProblem) -> DMatrix<f64> {
    problem.a_con.to_dense()
}

fn dense_p(problem: &QpProblem) -> DMatrix<f64> {
    let upper = problem.p_mat.to_dense();
    let mut full = upper.clone();
    for r in 0..full.nrows() {
        for c in 0..r {
            full[(r, c)] = upper[(c, r)];
        }
    }
    full
}

fn one_sided_rows(problem: &QpProblem) -> Vec<OneSided> {
    let mut rows = Vec::new();
    for j in 0..problem.n_con() {
        if problem.ub[j].is_finite() {
            rows.push(OneSided {
                row: j,
                sign: 1.0,
                bound: problem.ub[j],
            });
        }
        if problem.lb[j].is_finite() {
            rows.push(OneSided {
                row: j,
                sign: -1.0,
                bound: -problem.lb[j],
            });
        }
    }
    rows
}

/// Primal active-set method on the dense problem. Requires a strictly
/// feasible starting point and a positive definite cost.
pub fn active_set_solve(problem: &QpProblem, x_start: &[f64]) -> Vec<f64> {
    let n = problem.n_var();
    let p = dense_p(problem);
    let a = dense_a(problem);
    let q = DVector::from_column_slice(&problem.q_vec);
    let rows = one_sided_rows(problem);
    let g: Vec<DVector<f64>> = rows
        .iter()
        .map(|os| a.row(os.row).transpose() * os.sign)
        .collect();
    let h: Vec<f64> = rows.iter().map(|os| os.bound).collect();

    let mut x = DVector::from_column_slice(x_start);
    let mut working: Vec<usize> = Vec::new();
    let tol = 1e-10;

    for _iter in 0..600 {
        // solve the equality-constrained step
        let k = working.len();
        let dim = n + k;
        let mut kkt = DMatrix::zeros(dim, dim);
        kkt.view_mut((0, 0), (n, n)).copy_from(&p);
        for (idx, &w) in working.iter().enumerate() {
            for i in 0..n {
                kkt[(i, n + idx)] = g[w][i];
                kkt[(n + idx, i)] = g[w][i];
            }
        }
        let mut rhs = DVector::zeros(dim);
        let grad = &p * &x + &q;
        for i in 0..n {
            rhs[i] = -grad[i];
        }
        let sol = kkt
            .lu()
            .solve(&rhs)
            .expect("nondegenerate working-set KKT system");
        let step = sol.rows(0, n).into_owned();
        let lambda = sol.rows(n, k).into_owned();

        if step.amax() < 1e-9 {
            // KKT point for the working set; check multiplier signs
            let (mut worst, mut worst_idx) = (-tol, None);
            for (idx, &l) in lambda.iter().enumerate() {
                if l < worst {
                    worst = l;
                    worst_idx = Some(idx);
                }
            }
            match worst_idx {
                None => return x.as_slice().to_vec(),
                Some(idx) => {
                    working.remove(idx);
                }
            }
        } else {
            // step length to the nearest blocking constraint
            let mut alpha = 1.0f64;
            let mut blocking = None;
            for (ridx, gr) in g.iter().enumerate() {
                if working.contains(&ridx) {
                    continue;
                }
                let gp = gr.dot(&step);
                if gp > tol {
                    let slack = h[ridx] - gr.dot(&x);
                    let a_r = slack / gp;
                    if a_r < alpha {
                        alpha = a_r;
                        blocking = Some(ridx);
                    }
                }
            }
            x += step * alpha.max(0.0);
            if let Some(b) = blocking {
                working.push(b);
            }
        }
    }
    panic!("active-set oracle did not terminate");
}

/// Exhaustive KKT enumeration: every combination of {inactive, at lb,
/// at ub} per row. Only usable when 3^m is small.
pub fn enumeration_solve(problem: &QpProblem) -> Vec<f64> {
    let n = problem.n_var();
    let m = problem.n_con();
    let p = dense_p(problem);
    let a = dense_a(problem);
    let q = DVector::from_column_slice(&problem.q_vec);
    let feas_tol = 1e-7;

    let mut best: Option<(f64, Vec<f64>)> = None;
    let total = 3usize.pow(m as u32);
    'combos: for code in 0..total {
        // decode: 0 inactive, 1 at lb, 2 at ub
        let mut states = vec![0u8; m];
        let mut c = code;
        for s in states.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        let mut act = Vec::new();
        for (j, &s) in states.iter().enumerate() {
            match s {
                1 if problem.lb[j].is_finite() => act.push((j, problem.lb[j])),
                2 if problem.ub[j].is_finite() => act.push((j, problem.ub[j])),
                0 => {}
                _ => continue 'combos,
            }
        }
        let k = act.len();
        if k > n {
            continue;
        }
        let dim = n + k;
        let mut kkt = DMatrix::zeros(dim, dim);
        kkt.view_mut((0, 0), (n, n)).copy_from(&p);
        for (idx, &(j, _)) in act.iter().enumerate() {
            for i in 0..n {
                kkt[(i, n + idx)] = a[(j, i)];
                kkt[(n + idx, i)] = a[(j, i)];
            }
        }
        let mut rhs = DVector::zeros(dim);
        for i in 0..n {
            rhs[i] = -q[i];
        }
        for (idx, &(_, b)) in act.iter().enumerate() {
            rhs[n + idx] = b;
        }
        let Some(sol) = kkt.lu().solve(&rhs) else {
            continue;
        };
        let x = sol.rows(0, n).into_owned();
        // dual sign: y_j ≥ 0 at ub, y_j ≤ 0 at lb
        let mut ok = true;
        for (idx, &(j, _)) in act.iter().enumerate() {
            let y = sol[n + idx];
            let at_ub = states[j] == 2;
            if at_ub && y < -feas_tol {
                ok = false;
            }
            if !at_ub && y > feas_tol {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let ax = &a * &x;
        for j in 0..m {
            if ax[j] < problem.lb[j] - feas_tol || ax[j] > problem.ub[j] + feas_tol {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let obj = 0.5 * (&p * &x).dot(&x) + q.dot(&x);
        if best.as_ref().map_or(true, |(b, _)| obj < *b) {
            best = Some((obj, x.as_slice().to_vec()));
        }
    }
    best.expect("feasible problem must have a KKT point").1
}
