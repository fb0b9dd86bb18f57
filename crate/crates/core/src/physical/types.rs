//! Material, geometry and absorption descriptions of the heated tissue
//! column.

use serde::{Deserialize, Serialize};

use crate::dual::Dual;
use crate::physical::ModelError;

/// Thermal constants of the medium (water-dominated tissue).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialConstants {
    /// Density (kg/m³).
    pub rho: f64,
    /// Heat capacity (J/(kg·K)).
    pub cp: f64,
    /// Thermal conductivity (W/(m·K)).
    pub k: f64,
}

impl Default for MaterialConstants {
    fn default() -> Self {
        Self {
            rho: 993.0,
            cp: 4176.0,
            k: 0.627,
        }
    }
}

impl MaterialConstants {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.rho <= 0.0 || self.cp <= 0.0 || self.k <= 0.0 {
            return Err(ModelError::Config(
                "material constants must be strictly positive".into(),
            ));
        }
        Ok(())
    }

    /// Thermal diffusivity k/(ρ·C_p) in m²/s.
    pub fn diffusivity(&self) -> f64 {
        self.k / (self.rho * self.cp)
    }
}

/// Sign of the exponential weight in the volume-temperature output.
///
/// The output weight is μ(z)·exp(±∫₀ᶻμ). `Positive` is the printed form;
/// `Negative` is the Lambert–Beer attenuation reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VolWeightSign {
    Positive,
    Negative,
}

impl VolWeightSign {
    pub fn signum(self) -> f64 {
        match self {
            VolWeightSign::Positive => 1.0,
            VolWeightSign::Negative => -1.0,
        }
    }
}

/// Cylindrical computational domain with five tissue layers in depth.
///
/// The laser enters at z = 0 and the domain boundary (outer radius, top,
/// bottom) carries homogeneous Dirichlet conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    /// Radius R of the outer cylinder (m).
    pub r_outer: f64,
    /// Radius R_I of the irradiated inner cylinder (m).
    pub r_inner: f64,
    /// Ordered depths delimiting the tissue layers (m); first entry 0.
    pub layer_bounds: Vec<f64>,
    /// Index (into layers) of the RPE layer.
    pub rpe_layer: usize,
    /// Index (into layers) of the choroid layer.
    pub choroid_layer: usize,
    /// Midpoint depth of the RPE layer (m); peak-output location.
    pub z_center: f64,
    /// Lower integration bound of the volume-temperature output (m).
    pub z_b: f64,
    /// Upper integration bound of the volume-temperature output (m).
    pub z_e: f64,
    /// Sign convention of the volume-output exponential weight.
    pub vol_weight_sign: VolWeightSign,
}

impl Default for Geometry {
    fn default() -> Self {
        // Layering (m): anterior margin | neural retina | RPE | choroid |
        // posterior margin. RPE 10 µm, choroid 250 µm; total depth 1 mm.
        let layer_bounds = vec![0.0, 2.9e-4, 4.9e-4, 5.0e-4, 7.5e-4, 1.0e-3];
        Self {
            r_outer: 1.0e-3,
            r_inner: 1.0e-4,
            layer_bounds,
            rpe_layer: 2,
            choroid_layer: 3,
            z_center: 4.95e-4,
            z_b: 4.9e-4,
            z_e: 7.5e-4,
            vol_weight_sign: VolWeightSign::Positive,
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.r_inner > 0.0 && self.r_inner < self.r_outer) {
            return Err(ModelError::Config(format!(
                "require 0 < r_inner < r_outer, got {} and {}",
                self.r_inner, self.r_outer
            )));
        }
        if self.layer_bounds.len() < 2 || self.layer_bounds[0] != 0.0 {
            return Err(ModelError::Config(
                "layer_bounds must start at 0 and delimit at least one layer".into(),
            ));
        }
        if self.layer_bounds.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ModelError::Config(
                "layer_bounds must be strictly increasing".into(),
            ));
        }
        let n_layers = self.layer_bounds.len() - 1;
        if self.rpe_layer >= n_layers || self.choroid_layer >= n_layers {
            return Err(ModelError::Config("layer index out of range".into()));
        }
        let (rpe_lo, rpe_hi) = self.layer_interval(self.rpe_layer);
        if !(self.z_center > rpe_lo && self.z_center < rpe_hi) {
            return Err(ModelError::Config(
                "z_center must lie inside the RPE layer".into(),
            ));
        }
        let (_, ch_hi) = self.layer_interval(self.choroid_layer);
        if !(self.z_b < self.z_e) {
            return Err(ModelError::Config("require z_b < z_e".into()));
        }
        if self.z_b > rpe_lo || self.z_e < ch_hi {
            return Err(ModelError::Config(
                "[z_b, z_e] must cover the absorbing layers".into(),
            ));
        }
        Ok(())
    }

    pub fn n_layers(&self) -> usize {
        self.layer_bounds.len() - 1
    }

    pub fn layer_interval(&self, layer: usize) -> (f64, f64) {
        (self.layer_bounds[layer], self.layer_bounds[layer + 1])
    }

    pub fn total_depth(&self) -> f64 {
        *self.layer_bounds.last().unwrap()
    }
}

/// Piecewise-constant absorption in depth, with the RPE value scaled by
/// the spot-specific factor α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionProfile {
    /// Dimensionless RPE scaling factor.
    pub alpha: f64,
    /// Reference RPE absorption (1/m).
    pub mu_rpe_ref: f64,
    /// Choroid absorption (1/m).
    pub mu_choroid: f64,
}

impl Default for AbsorptionProfile {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            mu_rpe_ref: 120_400.0,
            mu_choroid: 2662.2,
        }
    }
}

impl AbsorptionProfile {
    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.alpha <= 0.0 {
            return Err(ModelError::Domain(format!(
                "absorption scaling alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.mu_rpe_ref < 0.0 || self.mu_choroid < 0.0 {
            return Err(ModelError::Config(
                "absorption coefficients must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Depth-dependent absorption evaluator for a fixed geometry, generic in α
/// so that exact α-derivatives fall out of dual arithmetic.
pub struct DepthAbsorption<'a> {
    geometry: &'a Geometry,
    profile: &'a AbsorptionProfile,
}

impl<'a> DepthAbsorption<'a> {
    pub fn new(geometry: &'a Geometry, profile: &'a AbsorptionProfile) -> Self {
        Self { geometry, profile }
    }

    /// μ within a layer; α enters only through the RPE layer.
    fn mu_layer(&self, layer: usize, alpha: Dual) -> Dual {
        if layer == self.geometry.rpe_layer {
            alpha * self.profile.mu_rpe_ref
        } else if layer == self.geometry.choroid_layer {
            Dual::constant(self.profile.mu_choroid)
        } else {
            Dual::constant(0.0)
        }
    }

    /// μ at depth z for a plain scalar α.
    pub fn mu_at(&self, z: f64, alpha: f64) -> f64 {
        for layer in 0..self.geometry.n_layers() {
            let (lo, hi) = self.geometry.layer_interval(layer);
            if z >= lo && z < hi {
                return self.mu_layer(layer, Dual::constant(alpha)).v;
            }
        }
        0.0
    }

    /// Optical depth τ(z) = ∫₀ᶻ μ dζ.
    pub fn optical_depth(&self, z: f64, alpha: Dual) -> Dual {
        let mut tau = Dual::constant(0.0);
        for layer in 0..self.geometry.n_layers() {
            let (lo, hi) = self.geometry.layer_interval(layer);
            let overlap = (z.min(hi) - lo).max(0.0);
            if overlap > 0.0 {
                tau = tau + self.mu_layer(layer, alpha) * overlap;
            }
        }
        tau
    }

    /// Total optical depth through all layers.
    pub fn total_optical_depth(&self, alpha: Dual) -> Dual {
        self.optical_depth(self.geometry.total_depth(), alpha)
    }

    /// Splits [a, b] at layer boundaries; yields (layer, lo, hi) pieces.
    fn pieces(&self, a: f64, b: f64) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        for layer in 0..self.geometry.n_layers() {
            let (lo, hi) = self.geometry.layer_interval(layer);
            let s = a.max(lo);
            let e = b.min(hi);
            if e > s {
                out.push((layer, s, e));
            }
        }
        out
    }

    /// ∫ₐᵇ μ(ζ) e^{s·τ(ζ)} dζ in closed form (s = ±1).
    ///
    /// Within a constant-μ piece d/dz e^{sτ} = sμe^{sτ}, so the integral is
    /// s·(e^{sτ(hi)} − e^{sτ(lo)}); zero-μ pieces contribute nothing.
    pub fn integral_mu_exp(&self, a: f64, b: f64, sign: f64, alpha: Dual) -> Dual {
        let mut acc = Dual::constant(0.0);
        for (layer, lo, hi) in self.pieces(a, b) {
            let mu = self.mu_layer(layer, alpha);
            if mu.v == 0.0 && mu.d == 0.0 {
                continue;
            }
            let e_lo = (self.optical_depth(lo, alpha) * sign).exp();
            let e_hi = (self.optical_depth(hi, alpha) * sign).exp();
            acc = acc + (e_hi - e_lo) * sign;
        }
        acc
    }

    /// ∫ₐᵇ (c₀ + c₁ζ)·μ(ζ)·e^{s·τ(ζ)} dζ in closed form (s = ±1).
    ///
    /// Used for the hat-function weights of the volume output:
    /// ∫ zμE = s·(z·E)|ᵃᵇ − (E(b) − E(a))/μ with E = e^{sτ}.
    pub fn integral_linear_mu_exp(
        &self,
        a: f64,
        b: f64,
        sign: f64,
        c0: f64,
        c1: f64,
        alpha: Dual,
    ) -> Dual {
        let mut acc = Dual::constant(0.0);
        for (layer, lo, hi) in self.pieces(a, b) {
            let mu = self.mu_layer(layer, alpha);
            if mu.v == 0.0 && mu.d == 0.0 {
                continue;
            }
            let e_lo = (self.optical_depth(lo, alpha) * sign).exp();
            let e_hi = (self.optical_depth(hi, alpha) * sign).exp();
            // ∫ μE = s(E(hi) − E(lo))
            let int_mu_e = (e_hi - e_lo) * sign;
            // ∫ zμE = s(hi·E(hi) − lo·E(lo)) − (E(hi) − E(lo))/μ
            let int_z_mu_e = (e_hi * hi - e_lo * lo) * sign - (e_hi - e_lo) / mu;
            acc = acc + int_mu_e * c0 + int_z_mu_e * c1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_geometry_is_valid() {
        Geometry::default().validate().unwrap();
        MaterialConstants::default().validate().unwrap();
        AbsorptionProfile::default().validate().unwrap();
    }

    #[test]
    fn rejects_inverted_radii() {
        let geom = Geometry {
            r_inner: 2.0e-3,
            ..Geometry::default()
        };
        assert!(geom.validate().is_err());
    }

    #[test]
    fn rejects_non_increasing_layer_bounds() {
        let mut geom = Geometry::default();
        geom.layer_bounds[2] = geom.layer_bounds[3];
        assert!(geom.validate().is_err());
    }

    #[test]
    fn mu_matches_reference_at_alpha_one() {
        let geom = Geometry::default();
        let profile = AbsorptionProfile::default();
        let depth = DepthAbsorption::new(&geom, &profile);
        // inside the RPE layer at alpha = 1 the absorption is the reference
        assert_eq!(depth.mu_at(4.95e-4, 1.0), 120_400.0);
        assert_eq!(depth.mu_at(6.0e-4, 1.0), 2662.2);
        assert_eq!(depth.mu_at(1.0e-4, 1.0), 0.0);
    }

    #[test]
    fn optical_depth_accumulates_layerwise() {
        let geom = Geometry::default();
        let profile = AbsorptionProfile::default();
        let depth = DepthAbsorption::new(&geom, &profile);
        let alpha = Dual::variable(1.0);
        let total = depth.total_optical_depth(alpha);
        let expected = 120_400.0 * 1.0e-5 + 2662.2 * 2.5e-4;
        assert_relative_eq!(total.v, expected, max_relative = 1e-12);
        // d(total)/dα = μ_RPE⁰ · d_RPE
        assert_relative_eq!(total.d, 120_400.0 * 1.0e-5, max_relative = 1e-12);
    }

    /// Composite midpoint quadrature split at layer boundaries so the
    /// discontinuity of μ does not pollute the reference value.
    fn piecewise_quadrature(
        geom: &Geometry,
        depth: &DepthAbsorption<'_>,
        a: f64,
        b: f64,
        alpha: Dual,
        f: impl Fn(f64, f64, f64) -> f64,
    ) -> f64 {
        let mut knots = vec![a, b];
        for &bound in &geom.layer_bounds {
            if bound > a && bound < b {
                knots.push(bound);
            }
        }
        knots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut acc = 0.0;
        for w in knots.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let n = 100_000;
            let h = (hi - lo) / n as f64;
            for i in 0..n {
                let z = lo + (i as f64 + 0.5) * h;
                let mu = depth.mu_at(z, alpha.v);
                let tau = depth.optical_depth(z, alpha).v;
                acc += f(z, mu, tau) * h;
            }
        }
        acc
    }

    #[test]
    fn closed_form_integral_matches_fine_quadrature() {
        let geom = Geometry::default();
        let profile = AbsorptionProfile::default();
        let depth = DepthAbsorption::new(&geom, &profile);
        let alpha = Dual::variable(0.9);
        for sign in [1.0, -1.0] {
            let (a, b) = (4.0e-4, 8.0e-4);
            let closed = depth.integral_mu_exp(a, b, sign, alpha);
            let acc = piecewise_quadrature(&geom, &depth, a, b, alpha, |_, mu, tau| {
                mu * (sign * tau).exp()
            });
            assert_relative_eq!(closed.v, acc, max_relative = 1e-8);
        }
    }

    #[test]
    fn linear_weighted_integral_matches_fine_quadrature() {
        let geom = Geometry::default();
        let profile = AbsorptionProfile::default();
        let depth = DepthAbsorption::new(&geom, &profile);
        let alpha = Dual::variable(1.1);
        let (a, b) = (4.85e-4, 5.2e-4);
        let (c0, c1) = (-3.0, 9000.0);
        let closed = depth.integral_linear_mu_exp(a, b, 1.0, c0, c1, alpha);
        let acc = piecewise_quadrature(&geom, &depth, a, b, alpha, |z, mu, tau| {
            (c0 + c1 * z) * mu * tau.exp()
        });
        assert_relative_eq!(closed.v, acc, max_relative = 1e-8);
    }

    #[test]
    fn integral_alpha_derivative_matches_finite_difference() {
        let geom = Geometry::default();
        let profile = AbsorptionProfile::default();
        let depth = DepthAbsorption::new(&geom, &profile);
        let a0 = 0.7363;
        let h = 1e-6 * a0;
        let f = |al: f64| {
            depth
                .integral_mu_exp(4.0e-4, 9.0e-4, -1.0, Dual::variable(al))
                .v
        };
        let fd = (f(a0 + h) - f(a0 - h)) / (2.0 * h);
        let dual = depth.integral_mu_exp(4.0e-4, 9.0e-4, -1.0, Dual::variable(a0));
        assert_relative_eq!(dual.d, fd, max_relative = 1e-7);
    }
}
