//! Discrete empirical interpolation of parameter-dependent vectors.
//!
//! A basis of the vector family is sampled at greedily selected rows; the
//! full vector is then recovered from those few entries, which makes the
//! α-dependent model vectors cheap to evaluate online.

use nalgebra::{DMatrix, DVector};

use crate::mor::{pod, MorError};

#[derive(Debug, Clone)]
pub struct DeimOperator {
    /// n × p basis of the vector family.
    pub basis: DMatrix<f64>,
    /// Greedily selected interpolation rows, no duplicates.
    pub indices: Vec<usize>,
    /// Inverse of the sampled basis rows (PᵀU)⁻¹, p × p.
    pub sampled_inv: DMatrix<f64>,
}

/// Number of singular values above the numerical-rank cutoff.
pub fn numerical_rank(snapshots: &DMatrix<f64>) -> usize {
    let svd = snapshots.clone().svd(false, false);
    let max = svd
        .singular_values
        .iter()
        .fold(0.0f64, |m, &s| m.max(s));
    if max <= 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > 1e-12 * max)
        .count()
}

/// Build the interpolation operator of order `p` from vector snapshots.
///
/// Greedy selection: the first index maximizes |u₁|; each following index
/// maximizes the residual of interpolating the next basis vector with the
/// rows selected so far.
pub fn deim(snapshots: &DMatrix<f64>, order: usize) -> Result<DeimOperator, MorError> {
    let basis = pod(snapshots, order)?.v;
    let n = basis.nrows();
    let p = basis.ncols();

    let mut indices = Vec::with_capacity(p);
    indices.push(argmax_abs(&basis.column(0).into_owned()));

    for l in 1..p {
        // interpolate basis column l with the current rows
        let u_sel = gather_rows(&basis.columns(0, l).into_owned(), &indices);
        let rhs = DVector::from_fn(l, |k, _| basis[(indices[k], l)]);
        let coeffs = u_sel
            .lu()
            .solve(&rhs)
            .ok_or_else(|| MorError::Numerical("singular sampled DEIM submatrix".into()))?;
        let residual = basis.column(l) - basis.columns(0, l) * coeffs;
        let idx = argmax_abs(&residual);
        debug_assert!(
            !indices.contains(&idx),
            "greedy DEIM selected a duplicate row"
        );
        indices.push(idx);
    }
    debug_assert!(indices.iter().all(|&i| i < n));

    let sampled = gather_rows(&basis, &indices);
    let sampled_inv = sampled
        .try_inverse()
        .ok_or_else(|| MorError::Numerical("singular sampled DEIM submatrix".into()))?;

    Ok(DeimOperator {
        basis,
        indices,
        sampled_inv,
    })
}

impl DeimOperator {
    pub fn order(&self) -> usize {
        self.indices.len()
    }

    /// Reconstruct the full vector from its entries at the selected rows.
    pub fn reconstruct(&self, sampled: &DVector<f64>) -> DVector<f64> {
        &self.basis * (&self.sampled_inv * sampled)
    }

    /// Entries of `vector` at the interpolation rows.
    pub fn sample(&self, vector: &[f64]) -> DVector<f64> {
        DVector::from_fn(self.order(), |k, _| vector[self.indices[k]])
    }
}

fn argmax_abs(v: &DVector<f64>) -> usize {
    let mut best = 0;
    let mut best_val = v[0].abs();
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x.abs() > best_val {
            best = i;
            best_val = x.abs();
        }
    }
    best
}

fn gather_rows(m: &DMatrix<f64>, rows: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), m.ncols(), |r, c| m[(rows[r], c)])
}
