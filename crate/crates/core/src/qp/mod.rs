//! Embedded operator-splitting solver for convex quadratic programs
//!
//!     min ½ xᵀPx + qᵀx   s.t.   lb ≤ Ax ≤ ub
//!
//! with warm starts and in-place vector/matrix updates between solves.
//! The KKT matrix is factorized once per sparsity pattern; vector updates
//! need no refactorization, value updates reuse the symbolic analysis.

mod scaling;
mod solver;

pub use solver::SolverHandle;

use thiserror::Error;

use crate::sparse::CscMatrix;

#[derive(Debug, Error)]
pub enum QpError {
    #[error("setup error: {0}")]
    Setup(String),
    #[error("update error: {0}")]
    Update(String),
}

/// Convex QP data. `p_mat` holds the upper triangle of the symmetric cost
/// matrix; `a_con` is the full m×n constraint matrix.
#[derive(Debug, Clone)]
pub struct QpProblem {
    pub p_mat: CscMatrix,
    pub q_vec: Vec<f64>,
    pub a_con: CscMatrix,
    pub lb: Vec<f64>,
    pub ub: Vec<f64>,
}

impl QpProblem {
    pub fn n_var(&self) -> usize {
        self.p_mat.ncols
    }

    pub fn n_con(&self) -> usize {
        self.a_con.nrows
    }

    pub fn validate(&self) -> Result<(), QpError> {
        let n = self.n_var();
        let m = self.n_con();
        if self.p_mat.nrows != n {
            return Err(QpError::Setup("cost matrix must be square".into()));
        }
        if self.q_vec.len() != n || self.a_con.ncols != n {
            return Err(QpError::Setup("dimension mismatch in q or A".into()));
        }
        if self.lb.len() != m || self.ub.len() != m {
            return Err(QpError::Setup("bound length mismatch".into()));
        }
        for c in 0..n {
            for p in self.p_mat.col_ptr[c]..self.p_mat.col_ptr[c + 1] {
                if self.p_mat.row_idx[p] > c {
                    return Err(QpError::Setup(
                        "p_mat must contain only the upper triangle".into(),
                    ));
                }
            }
        }
        for i in 0..m {
            if !(self.lb[i] <= self.ub[i]) {
                return Err(QpError::Setup(format!(
                    "lb > ub in constraint row {i}: {} > {}",
                    self.lb[i], self.ub[i]
                )));
            }
        }
        Ok(())
    }

    /// ½xᵀPx + qᵀx.
    pub fn objective(&self, x: &[f64]) -> f64 {
        let mut px = vec![0.0; self.n_var()];
        symmetric_mul_vec(&self.p_mat, x, &mut px);
        0.5 * dot(&px, x) + dot(&self.q_vec, x)
    }
}

/// y = P x for a symmetric P stored as its upper triangle.
pub(crate) fn symmetric_mul_vec(upper: &CscMatrix, x: &[f64], y: &mut [f64]) {
    y.fill(0.0);
    for c in 0..upper.ncols {
        let xc = x[c];
        for p in upper.col_ptr[c]..upper.col_ptr[c + 1] {
            let r = upper.row_idx[p];
            let v = upper.values[p];
            y[r] += v * xc;
            if r != c {
                y[c] += v * x[r];
            }
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Solved,
    MaxIter,
    PrimalInfeasible,
    DualInfeasible,
}

#[derive(Debug, Clone)]
pub struct QpSolution {
    pub x_opt: Vec<f64>,
    pub y_opt: Vec<f64>,
    pub status: SolveStatus,
    pub iters: usize,
    pub solve_time_ns: u64,
}

/// Operator-splitting parameters. The step size for equality rows
/// (lb = ub) is boosted by 10³ as is standard for ADMM on mixed
/// equality/inequality constraints.
#[derive(Debug, Clone, Copy)]
pub struct SolverSettings {
    pub rho: f64,
    pub sigma: f64,
    /// Over-relaxation factor in (0, 2).
    pub relax: f64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    /// Infeasibility-certificate tolerance.
    pub eps_inf: f64,
    pub max_iter: usize,
    pub check_interval: usize,
    /// Ruiz equilibration sweeps performed once at setup.
    pub scaling_iters: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            rho: 0.1,
            sigma: 1e-6,
            relax: 1.6,
            eps_abs: 1e-6,
            eps_rel: 1e-6,
            eps_inf: 1e-6,
            max_iter: 4000,
            check_interval: 25,
            scaling_iters: 10,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<(), QpError> {
        if self.rho <= 0.0 || self.sigma <= 0.0 {
            return Err(QpError::Setup("rho and sigma must be positive".into()));
        }
        if !(self.relax > 0.0 && self.relax < 2.0) {
            return Err(QpError::Setup("relax must be in (0, 2)".into()));
        }
        if self.max_iter == 0 || self.check_interval == 0 {
            return Err(QpError::Setup(
                "max_iter and check_interval must be positive".into(),
            ));
        }
        Ok(())
    }
}
