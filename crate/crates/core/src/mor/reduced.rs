//! The discrete-time parametric surrogate model
//!
//!     x_{k+1} = A_d x_k + B(α) u_k,   y_vol = C_vol(α) x,   y_peak = C_peak x
//!
//! with B(α) and C_vol(α) recovered online from a handful of closed-form
//! entries of the full-order vectors at the DEIM rows.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dual::Dual;
use crate::mor::{DeimOperator, MorError, PodBasis};
use crate::physical::{
    input_entry_dual, vol_output_entry_dual, AbsorptionProfile, FullOrderModel, Geometry, Grid,
    MaterialConstants,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReducedModel {
    /// r × r discrete-time system matrix.
    pub a_d: DMatrix<f64>,
    /// Reduced peak-output row.
    pub c_peak_r: DVector<f64>,
    /// Time step (s) baked into `a_d` and the input map.
    pub dt: f64,
    /// Parameter grid the reduction was trained on.
    pub train_alphas: Vec<f64>,
    /// Evaluations clamp α to this interval (the training range).
    pub alpha_range: (f64, f64),

    // DEIM sampling: projected interpolation matrices and sampled rows
    b_indices: Vec<usize>,
    /// r × p map from sampled b entries to the reduced input vector
    /// (includes A_d·dt and the POD projection).
    m_b: DMatrix<f64>,
    c_indices: Vec<usize>,
    /// p × r map from sampled output weights to the reduced output row.
    m_c: DMatrix<f64>,

    // enough of the full-order description to evaluate single entries
    grid: Grid,
    geometry: Geometry,
    material: MaterialConstants,
    absorption: AbsorptionProfile,
}

/// Galerkin-project the full model onto the POD basis and discretize with
/// implicit Euler: A_d = (I − dt·VᵀA_fV)⁻¹ and B(α) = A_d·dt·Vᵀb̂(α).
pub fn reduce_and_discretize(
    full: &FullOrderModel,
    basis: &PodBasis,
    deim_b: &DeimOperator,
    deim_c: &DeimOperator,
    dt: f64,
    train_alphas: &[f64],
) -> Result<ReducedModel, MorError> {
    if dt <= 0.0 {
        return Err(MorError::Assembly("dt must be positive".into()));
    }
    let n = full.n();
    let r = basis.rank();
    if basis.v.nrows() != n {
        return Err(MorError::Assembly("basis does not match the model".into()));
    }

    // A_r = Vᵀ A_f V via sparse matvecs on the basis columns
    let mut av = DMatrix::zeros(n, r);
    let mut col = vec![0.0; n];
    let mut out = vec![0.0; n];
    for c in 0..r {
        for k in 0..n {
            col[k] = basis.v[(k, c)];
        }
        full.a_full.mul_vec_into(&col, &mut out);
        for k in 0..n {
            av[(k, c)] = out[k];
        }
    }
    let a_r = basis.v.transpose() * av;

    let a_d = (DMatrix::identity(r, r) - &a_r * dt)
        .try_inverse()
        .ok_or_else(|| MorError::Numerical("implicit-Euler operator not invertible".into()))?;

    let spectral_radius = a_d
        .complex_eigenvalues()
        .iter()
        .fold(0.0f64, |m, l| m.max(l.norm()));
    if spectral_radius >= 1.0 {
        return Err(MorError::Numerical(format!(
            "reduced discrete model unstable: spectral radius {spectral_radius}"
        )));
    }

    // projected DEIM maps
    let m_b = &a_d * (basis.v.transpose() * &deim_b.basis * &deim_b.sampled_inv) * dt;
    let m_c = deim_c.sampled_inv.transpose() * (deim_c.basis.transpose() * &basis.v);

    let mut c_peak_r = DVector::zeros(r);
    for &(k, w) in &full.c_peak {
        for c in 0..r {
            c_peak_r[c] += w * basis.v[(k, c)];
        }
    }

    Ok(ReducedModel {
        a_d,
        c_peak_r,
        dt,
        train_alphas: train_alphas.to_vec(),
        alpha_range: (
            *train_alphas.first().unwrap_or(&0.2),
            *train_alphas.last().unwrap_or(&2.0),
        ),
        b_indices: deim_b.indices.clone(),
        m_b,
        c_indices: deim_c.indices.clone(),
        m_c,
        grid: full.grid.clone(),
        geometry: full.geometry.clone(),
        material: full.material,
        absorption: full.absorption,
    })
}

impl ReducedModel {
    pub fn dim(&self) -> usize {
        self.a_d.nrows()
    }

    /// Clamp α to the trained interval; the flag reports whether clamping
    /// occurred.
    pub fn clamp_alpha(&self, alpha: f64) -> (f64, bool) {
        let (lo, hi) = self.alpha_range;
        if alpha < lo {
            (lo, true)
        } else if alpha > hi {
            (hi, true)
        } else {
            (alpha, false)
        }
    }

    fn sampled_b(&self, alpha: Dual) -> (DVector<f64>, DVector<f64>) {
        let p = self.b_indices.len();
        let mut vals = DVector::zeros(p);
        let mut ders = DVector::zeros(p);
        for (k, &idx) in self.b_indices.iter().enumerate() {
            let e = input_entry_dual(
                &self.grid,
                &self.geometry,
                &self.material,
                &self.absorption,
                alpha,
                idx,
            );
            vals[k] = e.v;
            ders[k] = e.d;
        }
        (vals, ders)
    }

    fn sampled_c(&self, alpha: Dual) -> (DVector<f64>, DVector<f64>) {
        let p = self.c_indices.len();
        let mut vals = DVector::zeros(p);
        let mut ders = DVector::zeros(p);
        for (k, &idx) in self.c_indices.iter().enumerate() {
            let e = vol_output_entry_dual(&self.grid, &self.geometry, &self.absorption, alpha, idx);
            vals[k] = e.v;
            ders[k] = e.d;
        }
        (vals, ders)
    }

    /// Reduced input vector B(α) (dt folded in).
    pub fn eval_b(&self, alpha: f64) -> DVector<f64> {
        let (a, _) = self.clamp_alpha(alpha);
        let (vals, _) = self.sampled_b(Dual::variable(a));
        &self.m_b * vals
    }

    /// Reduced volume-output row C_vol(α).
    pub fn eval_cvol(&self, alpha: f64) -> DVector<f64> {
        let (a, _) = self.clamp_alpha(alpha);
        let (vals, _) = self.sampled_c(Dual::variable(a));
        (vals.transpose() * &self.m_c).transpose()
    }

    /// Analytic derivatives (dB/dα, dC_vol/dα) at the clamped parameter.
    pub fn eval_derivatives(&self, alpha: f64) -> (DVector<f64>, DVector<f64>) {
        let (a, _) = self.clamp_alpha(alpha);
        let (_, db_s) = self.sampled_b(Dual::variable(a));
        let (_, dc_s) = self.sampled_c(Dual::variable(a));
        let db = &self.m_b * db_s;
        let dc = (dc_s.transpose() * &self.m_c).transpose();
        (db, dc)
    }

    /// One step x⁺ = A_d x + B(α) u with a precomputed input vector.
    pub fn step_with(&self, x: &DVector<f64>, b: &DVector<f64>, u: f64) -> DVector<f64> {
        &self.a_d * x + b * u
    }

    pub fn step(&self, x: &DVector<f64>, u: f64, alpha: f64) -> DVector<f64> {
        self.step_with(x, &self.eval_b(alpha), u)
    }

    pub fn y_peak(&self, x: &DVector<f64>) -> f64 {
        self.c_peak_r.dot(x)
    }

    pub fn y_vol(&self, x: &DVector<f64>, alpha: f64) -> f64 {
        self.eval_cvol(alpha).dot(x)
    }

    /// Static gain y_peak per unit constant input: C_peak (I − A_d)⁻¹ B(α).
    pub fn steady_state_gain(&self, alpha: f64) -> Result<f64, MorError> {
        let r = self.dim();
        let b = self.eval_b(alpha);
        let x_inf = (DMatrix::identity(r, r) - &self.a_d)
            .lu()
            .solve(&b)
            .ok_or_else(|| MorError::Numerical("I - A_d singular".into()))?;
        Ok(self.c_peak_r.dot(&x_inf))
    }

    pub fn spectral_radius(&self) -> f64 {
        self.a_d
            .complex_eigenvalues()
            .iter()
            .fold(0.0f64, |m, l| m.max(l.norm()))
    }
}
