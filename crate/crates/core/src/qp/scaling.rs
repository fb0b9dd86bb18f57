//! Ruiz equilibration of the QP data, performed once at setup.
//!
//! Iteratively scales variables and constraints by the inverse square root
//! of the ∞-norms of the stacked matrix [P Aᵀ; A 0], then normalizes the
//! cost. The resulting diagonal scalings D, E and cost factor c are kept so
//! that later value updates can be scaled consistently and results can be
//! reported in original units.

use crate::sparse::CscMatrix;

pub struct Equilibration {
    /// Variable scaling D (length n).
    pub d: Vec<f64>,
    /// Constraint scaling E (length m).
    pub e: Vec<f64>,
    /// Cost scaling c.
    pub c: f64,
}

impl Equilibration {
    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            d: vec![1.0; n],
            e: vec![1.0; m],
            c: 1.0,
        }
    }
}

fn guarded_inv_sqrt(x: f64) -> f64 {
    if x <= 1e-12 {
        1.0
    } else {
        1.0 / x.sqrt()
    }
}

/// Column ∞-norms of the full symmetric matrix stored as upper triangle.
fn symmetric_col_norms(upper: &CscMatrix, out: &mut [f64]) {
    out.fill(0.0);
    for c in 0..upper.ncols {
        for p in upper.col_ptr[c]..upper.col_ptr[c + 1] {
            let r = upper.row_idx[p];
            let v = upper.values[p].abs();
            out[c] = out[c].max(v);
            if r != c {
                out[r] = out[r].max(v);
            }
        }
    }
}

/// Equilibrate (P, q, A) in place and return the accumulated scalings.
pub fn ruiz_equilibrate(
    p_upper: &mut CscMatrix,
    q: &mut [f64],
    a: &mut CscMatrix,
    iters: usize,
) -> Equilibration {
    let n = p_upper.ncols;
    let m = a.nrows;
    let mut eq = Equilibration::identity(n, m);
    let mut p_norms = vec![0.0; n];
    let mut a_col_norms = vec![0.0; n];
    let mut a_row_norms = vec![0.0; m];
    let mut delta_d = vec![0.0; n];
    let mut delta_e = vec![0.0; m];

    for _ in 0..iters {
        symmetric_col_norms(p_upper, &mut p_norms);
        a.col_inf_norms(&mut a_col_norms);
        a.row_inf_norms(&mut a_row_norms);

        for i in 0..n {
            delta_d[i] = guarded_inv_sqrt(p_norms[i].max(a_col_norms[i]));
        }
        for j in 0..m {
            delta_e[j] = guarded_inv_sqrt(a_row_norms[j]);
        }

        p_upper.scale(&delta_d, &delta_d);
        a.scale(&delta_e, &delta_d);
        for i in 0..n {
            q[i] *= delta_d[i];
            eq.d[i] *= delta_d[i];
        }
        for j in 0..m {
            eq.e[j] *= delta_e[j];
        }

        // cost normalization
        symmetric_col_norms(p_upper, &mut p_norms);
        let mean_p = if n > 0 {
            p_norms.iter().sum::<f64>() / n as f64
        } else {
            0.0
        };
        let q_norm = q.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        let denom = mean_p.max(q_norm);
        let gamma = if denom <= 1e-12 { 1.0 } else { 1.0 / denom };
        for v in p_upper.values.iter_mut() {
            *v *= gamma;
        }
        for v in q.iter_mut() {
            *v *= gamma;
        }
        eq.c *= gamma;
    }
    eq
}
