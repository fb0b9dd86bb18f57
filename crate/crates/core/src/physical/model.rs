//! Assembly and time stepping of the full-order heat model.
//!
//! The PDE ρC_p ∂x/∂t − kΔx = source is discretized with second-order
//! finite differences on the axisymmetric grid. The continuous-time system
//! matrix is A = (k/(ρC_p))·Δ_h with homogeneous Dirichlet boundary; the
//! input vector carries the Lambert–Beer deposition integrated exactly
//! over each grid cell so the absorbed power matches the analytic value at
//! any resolution.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::dual::Dual;
use crate::physical::{
    AbsorptionProfile, DepthAbsorption, Geometry, Grid, MaterialConstants, ModelError,
};
use crate::sparse::{CscMatrix, LdlFactorization};

/// Stencil triplets of the continuous-time system matrix (1/s).
fn system_triplets(grid: &Grid, material: &MaterialConstants) -> Vec<(usize, usize, f64)> {
    let kappa = material.diffusivity();
    let inv_dr2 = 1.0 / (grid.dr * grid.dr);
    let inv_dz2 = 1.0 / (grid.dz * grid.dz);
    let mut trips = Vec::with_capacity(5 * grid.n());
    for j in 0..grid.n_z {
        for i in 0..grid.n_r {
            let row = grid.index(i, j);
            let mut diag = 0.0;

            // depth direction
            diag -= 2.0 * kappa * inv_dz2;
            if j > 0 {
                trips.push((row, grid.index(i, j - 1), kappa * inv_dz2));
            }
            if j + 1 < grid.n_z {
                trips.push((row, grid.index(i, j + 1), kappa * inv_dz2));
            }

            // radial direction; at the axis the radial operator reduces to
            // 2·x_rr by symmetry, discretized as 4(x_1 − x_0)/dr²
            if i == 0 {
                diag -= 4.0 * kappa * inv_dr2;
                if grid.n_r > 1 {
                    trips.push((row, grid.index(1, j), 4.0 * kappa * inv_dr2));
                }
            } else {
                let r = grid.r(i);
                let c_plus = kappa * (inv_dr2 + 1.0 / (2.0 * r * grid.dr));
                let c_minus = kappa * (inv_dr2 - 1.0 / (2.0 * r * grid.dr));
                diag -= 2.0 * kappa * inv_dr2;
                trips.push((row, grid.index(i - 1, j), c_minus));
                if i + 1 < grid.n_r {
                    trips.push((row, grid.index(i + 1, j), c_plus));
                }
            }
            trips.push((row, row, diag));
        }
    }
    trips
}

/// Discretized (k/(ρC_p))·Δ with homogeneous Dirichlet boundary.
pub fn assemble_system_matrix(grid: &Grid, material: &MaterialConstants) -> CscMatrix {
    let trips = system_triplets(grid, material);
    CscMatrix::from_triplets(grid.n(), grid.n(), &trips).expect("stencil indices are in range")
}

/// Single entry of the input vector b(α) at flat index `flat`, with its
/// α-derivative. Units: K/(s·W).
pub fn input_entry_dual(
    grid: &Grid,
    geometry: &Geometry,
    material: &MaterialConstants,
    absorption: &AbsorptionProfile,
    alpha: Dual,
    flat: usize,
) -> Dual {
    let (i, j) = grid.node(flat);
    let frac = grid.radial_inner_fraction(i, geometry.r_inner);
    if frac == 0.0 {
        return Dual::constant(0.0);
    }
    let depth = DepthAbsorption::new(geometry, absorption);
    let (za, zb) = grid.z_cell(j);
    // cell average of μ e^{−τ}
    let g = depth.integral_mu_exp(za, zb, -1.0, alpha) / grid.dz;
    let scale = frac
        / (std::f64::consts::PI * geometry.r_inner * geometry.r_inner * material.rho * material.cp);
    g * scale
}

/// Input vector b(α) mapping laser power (W) to heating rate (K/s).
pub fn assemble_input_vector(
    grid: &Grid,
    geometry: &Geometry,
    material: &MaterialConstants,
    absorption: &AbsorptionProfile,
) -> Result<Vec<f64>, ModelError> {
    absorption.validate()?;
    let alpha = Dual::constant(absorption.alpha);
    let mut b = vec![0.0; grid.n()];
    for j in 0..grid.n_z {
        // depth factor shared by the whole ring of nodes at this depth
        let probe = input_entry_dual(grid, geometry, material, absorption, alpha, grid.index(0, j));
        if probe.v == 0.0 {
            // zero at the axis implies zero depth weight for the whole row
            continue;
        }
        let frac0 = grid.radial_inner_fraction(0, geometry.r_inner);
        for i in 0..grid.n_r {
            let frac = grid.radial_inner_fraction(i, geometry.r_inner);
            if frac > 0.0 {
                b[grid.index(i, j)] = probe.v * frac / frac0;
            }
        }
    }
    Ok(b)
}

/// Normalized depth weights ω_j/W of the volume output for one depth node,
/// with α-derivative. The weight integrates the hat function of node j
/// against μ e^{±τ} over [z_b, z_e]; W normalizes a uniform state to
/// itself.
pub fn vol_depth_weight_dual(
    grid: &Grid,
    geometry: &Geometry,
    absorption: &AbsorptionProfile,
    alpha: Dual,
    j: usize,
) -> Dual {
    let depth = DepthAbsorption::new(geometry, absorption);
    let sign = geometry.vol_weight_sign.signum();
    let w_total = depth.integral_mu_exp(geometry.z_b, geometry.z_e, sign, alpha);
    let omega = vol_hat_integral(grid, geometry, &depth, sign, alpha, j);
    omega / w_total
}

/// ∫ hat_j(z)·μ(z)·e^{±τ(z)} dz over [z_b, z_e].
fn vol_hat_integral(
    grid: &Grid,
    geometry: &Geometry,
    depth: &DepthAbsorption<'_>,
    sign: f64,
    alpha: Dual,
    j: usize,
) -> Dual {
    let zj = grid.z(j);
    let dz = grid.dz;
    let mut acc = Dual::constant(0.0);
    // rising piece on [z_j − dz, z_j]
    let lo = (zj - dz).max(geometry.z_b);
    let hi = zj.min(geometry.z_e);
    if hi > lo {
        acc = acc + depth.integral_linear_mu_exp(lo, hi, sign, -(zj - dz) / dz, 1.0 / dz, alpha);
    }
    // falling piece on [z_j, z_j + dz]
    let lo = zj.max(geometry.z_b);
    let hi = (zj + dz).min(geometry.z_e);
    if hi > lo {
        acc = acc + depth.integral_linear_mu_exp(lo, hi, sign, (zj + dz) / dz, -1.0 / dz, alpha);
    }
    acc
}

/// Single entry of the volume-output row c_vol(α) at flat index `flat`,
/// with its α-derivative.
pub fn vol_output_entry_dual(
    grid: &Grid,
    geometry: &Geometry,
    absorption: &AbsorptionProfile,
    alpha: Dual,
    flat: usize,
) -> Dual {
    let (i, j) = grid.node(flat);
    let depth_w = vol_depth_weight_dual(grid, geometry, absorption, alpha, j);
    depth_w * radial_mean_weight(grid, i)
}

/// Area-weighted radial mean weight of node i (full radius).
pub fn radial_mean_weight(grid: &Grid, i: usize) -> f64 {
    let r_edge = grid.r_outer - 0.5 * grid.dr;
    grid.radial_area(i) / (std::f64::consts::PI * r_edge * r_edge)
}

/// Volume-temperature output row: depth-weighted average of the radial
/// mean temperature, normalized so a uniform state maps to itself.
pub fn assemble_vol_output(
    grid: &Grid,
    geometry: &Geometry,
    absorption: &AbsorptionProfile,
) -> Result<Vec<f64>, ModelError> {
    absorption.validate()?;
    let alpha = Dual::constant(absorption.alpha);
    let mut c = vec![0.0; grid.n()];
    for j in 0..grid.n_z {
        let depth_w = vol_depth_weight_dual(grid, geometry, absorption, alpha, j).v;
        if depth_w == 0.0 {
            continue;
        }
        for i in 0..grid.n_r {
            c[grid.index(i, j)] = depth_w * radial_mean_weight(grid, i);
        }
    }
    Ok(c)
}

/// Peak-temperature output: point evaluation at (r = 0, z = z_center),
/// linearly interpolated between the two nearest depth nodes.
pub fn assemble_peak_output(
    grid: &Grid,
    geometry: &Geometry,
) -> Result<Vec<(usize, f64)>, ModelError> {
    let jf = geometry.z_center / grid.dz - 1.0;
    if jf < 0.0 || jf > (grid.n_z - 1) as f64 {
        return Err(ModelError::Config(format!(
            "z_center = {} lies outside the interior grid",
            geometry.z_center
        )));
    }
    let j0 = jf.floor() as usize;
    let frac = jf - j0 as f64;
    let tol = 1e-9;
    if frac.abs() < tol {
        Ok(vec![(grid.index(0, j0), 1.0)])
    } else if (1.0 - frac).abs() < tol {
        Ok(vec![(grid.index(0, j0 + 1), 1.0)])
    } else {
        Ok(vec![
            (grid.index(0, j0), 1.0 - frac),
            (grid.index(0, j0 + 1), frac),
        ])
    }
}

/// Full-order sparse heat model with α-dependent input and output maps.
///
/// The implicit-Euler operator (I − dt·A) is factorized once per time step
/// size and reused; assembly is immutable afterwards. Instances are meant
/// to be owned by one thread.
pub struct FullOrderModel {
    pub grid: Grid,
    pub geometry: Geometry,
    pub material: MaterialConstants,
    pub absorption: AbsorptionProfile,
    /// Continuous-time system matrix (1/s).
    pub a_full: CscMatrix,
    /// Input vector b(α), K/(s·W).
    pub b_full: Vec<f64>,
    /// Volume-output weights (dimensionless, sum 1 columnwise in depth).
    pub c_vol: Vec<f64>,
    /// Peak-output interpolation weights.
    pub c_peak: Vec<(usize, f64)>,
    stencil: Vec<(usize, usize, f64)>,
    /// sqrt of the similarity weights that symmetrize A.
    d_half: Vec<f64>,
    factors: RefCell<HashMap<u64, LdlFactorization>>,
}

impl FullOrderModel {
    pub fn assemble(
        geometry: Geometry,
        material: MaterialConstants,
        absorption: AbsorptionProfile,
        n_r: usize,
        n_z: usize,
    ) -> Result<Self, ModelError> {
        material.validate()?;
        absorption.validate()?;
        let grid = super::build_grid(&geometry, n_r, n_z)?;
        let stencil = system_triplets(&grid, &material);
        let a_full = CscMatrix::from_triplets(grid.n(), grid.n(), &stencil)
            .expect("stencil indices are in range");
        let b_full = assemble_input_vector(&grid, &geometry, &material, &absorption)?;
        let c_vol = assemble_vol_output(&grid, &geometry, &absorption)?;
        let c_peak = assemble_peak_output(&grid, &geometry)?;

        // similarity weights: d_0 = dr/8 at the axis, d_i = r_i otherwise;
        // D^{1/2} A D^{-1/2} is symmetric with these
        let mut d_half = vec![0.0; grid.n()];
        for j in 0..grid.n_z {
            for i in 0..grid.n_r {
                let d = if i == 0 { grid.dr / 8.0 } else { grid.r(i) };
                d_half[grid.index(i, j)] = d.sqrt();
            }
        }

        Ok(Self {
            grid,
            geometry,
            material,
            absorption,
            a_full,
            b_full,
            c_vol,
            c_peak,
            stencil,
            d_half,
            factors: RefCell::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    /// Swap the absorption scaling; the system matrix and cached
    /// factorizations stay valid since A does not depend on α.
    pub fn set_alpha(&mut self, alpha: f64) -> Result<(), ModelError> {
        self.absorption = self.absorption.with_alpha(alpha);
        self.b_full = assemble_input_vector(
            &self.grid,
            &self.geometry,
            &self.material,
            &self.absorption,
        )?;
        self.c_vol = assemble_vol_output(&self.grid, &self.geometry, &self.absorption)?;
        Ok(())
    }

    /// Upper triangle of the symmetrized implicit-Euler operator
    /// I − dt·D^{1/2}AD^{-1/2}.
    fn implicit_upper(&self, dt: f64) -> CscMatrix {
        let n = self.n();
        let mut trips = Vec::with_capacity(self.stencil.len());
        for &(r, c, v) in &self.stencil {
            if r < c {
                trips.push((r, c, -dt * v * self.d_half[r] / self.d_half[c]));
            } else if r == c {
                trips.push((r, r, 1.0 - dt * v));
            }
        }
        CscMatrix::from_triplets(n, n, &trips).expect("stencil indices are in range")
    }

    fn with_factor<R>(&self, dt: f64, f: impl FnOnce(&LdlFactorization) -> R) -> R {
        assert!(dt > 0.0, "time step must be positive");
        let key = dt.to_bits();
        let mut cache = self.factors.borrow_mut();
        let fact = cache.entry(key).or_insert_with(|| {
            LdlFactorization::new(&self.implicit_upper(dt))
                .expect("implicit-Euler operator is SPD for dt > 0")
        });
        f(fact)
    }

    /// One implicit-Euler step: x⁺ = (I − dt·A)⁻¹ (x + dt·b(α)·u).
    pub fn step(&self, x: &[f64], u: f64, dt: f64) -> Vec<f64> {
        assert_eq!(x.len(), self.n());
        let mut w: Vec<f64> = (0..self.n())
            .map(|k| (x[k] + dt * self.b_full[k] * u) * self.d_half[k])
            .collect();
        self.with_factor(dt, |fact| fact.solve_in_place(&mut w));
        for k in 0..self.n() {
            w[k] /= self.d_half[k];
        }
        w
    }

    /// Square roots of the cell-volume weights that symmetrize A; the
    /// natural inner product for projection-based reduction.
    pub fn volume_half_weights(&self) -> &[f64] {
        &self.d_half
    }

    pub fn y_vol(&self, x: &[f64]) -> f64 {
        self.c_vol.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn y_peak(&self, x: &[f64]) -> f64 {
        self.c_peak.iter().map(|&(k, w)| w * x[k]).sum()
    }

    /// Spectral radius of the implicit-Euler map (I − dt·A)⁻¹ by power
    /// iteration; < 1 certifies the negative spectral abscissa of A.
    pub fn implicit_step_spectral_radius(&self, dt: f64, iterations: usize) -> f64 {
        let n = self.n();
        let mut v: Vec<f64> = (0..n)
            .map(|k| ((k * 2654435761) % 1000) as f64 / 1000.0 + 0.5)
            .collect();
        let mut lambda = 0.0;
        self.with_factor(dt, |fact| {
            for _ in 0..iterations {
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                for x in v.iter_mut() {
                    *x /= norm;
                }
                fact.solve_in_place(&mut v);
                lambda = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            }
        });
        lambda
    }
}
