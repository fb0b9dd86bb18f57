//! Proper orthogonal decomposition of the snapshot matrix.

use nalgebra::DMatrix;

use crate::mor::MorError;

/// Ratio below which trailing singular values count as numerically zero.
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct PodBasis {
    /// n × r orthonormal basis (leading left singular vectors).
    pub v: DMatrix<f64>,
    /// Leading r singular values, descending.
    pub singular_values: Vec<f64>,
    /// Captured energy Σᵢ≤r σᵢ² / Σσᵢ².
    pub energy_ratio: f64,
}

/// Leading-r left singular basis of the snapshot matrix.
pub fn pod(snapshots: &DMatrix<f64>, rank: usize) -> Result<PodBasis, MorError> {
    let (n, s) = snapshots.shape();
    if rank == 0 || rank > n.min(s) {
        return Err(MorError::Rank(format!(
            "rank {rank} outside 1..= min(n, s) = {}",
            n.min(s)
        )));
    }
    let svd = snapshots.clone().svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");

    // sort singular values descending and permute columns accordingly
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();

    if sigma[0] <= 0.0 || sigma[rank - 1] <= RANK_TOL * sigma[0] {
        return Err(MorError::Rank(format!(
            "requested rank {rank} exceeds the numerical rank of the snapshots"
        )));
    }

    let mut v = DMatrix::zeros(n, rank);
    for (col, &i) in order.iter().take(rank).enumerate() {
        v.set_column(col, &u.column(i));
    }

    let total: f64 = sigma.iter().map(|s| s * s).sum();
    let captured: f64 = sigma.iter().take(rank).map(|s| s * s).sum();

    Ok(PodBasis {
        v,
        singular_values: sigma.into_iter().take(rank).collect(),
        energy_ratio: captured / total,
    })
}

impl PodBasis {
    pub fn rank(&self) -> usize {
        self.v.ncols()
    }

    /// Largest deviation of vᵀv from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.v.transpose() * &self.v;
        let mut worst = 0.0f64;
        for r in 0..gram.nrows() {
            for c in 0..gram.ncols() {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((gram[(r, c)] - target).abs());
            }
        }
        worst
    }
}
