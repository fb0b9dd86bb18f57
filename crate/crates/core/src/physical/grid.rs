//! Axisymmetric finite-difference grid on the cylinder [0, R] × [0, depth].
//!
//! Interior nodes carry the state; the outer radius, top and bottom planes
//! are homogeneous Dirichlet and excluded from the state vector. The axis
//! r = 0 is an interior node handled by symmetry.

use serde::{Deserialize, Serialize};

use crate::physical::{Geometry, ModelError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Interior radial nodes r_i = i·dr, i = 0..n_r (node at R excluded).
    pub n_r: usize,
    /// Interior depth nodes z_j = (j+1)·dz, j = 0..n_z (z = 0 and z = depth excluded).
    pub n_z: usize,
    pub dr: f64,
    pub dz: f64,
    pub r_outer: f64,
    pub depth: f64,
}

/// Build a uniform grid covering the geometry.
///
/// `n_r` is the number of interior radial nodes (including the axis) and
/// `n_z` the number of interior depth nodes; the state dimension is
/// `n_r · n_z`.
pub fn build_grid(geometry: &Geometry, n_r: usize, n_z: usize) -> Result<Grid, ModelError> {
    geometry.validate()?;
    if n_r < 4 {
        return Err(ModelError::Config(format!(
            "n_r must be at least 4, got {n_r}"
        )));
    }
    let min_nz = geometry.n_layers() + 2;
    if n_z < min_nz {
        return Err(ModelError::Config(format!(
            "n_z must be at least layers + 2 = {min_nz}, got {n_z}"
        )));
    }
    Ok(Grid::uniform(geometry, n_r, n_z))
}

impl Grid {
    /// Uniform grid without the resolution preconditions; used by tests
    /// that probe degenerate stencils.
    pub(crate) fn uniform(geometry: &Geometry, n_r: usize, n_z: usize) -> Self {
        let depth = geometry.total_depth();
        Self {
            n_r,
            n_z,
            dr: geometry.r_outer / n_r as f64,
            dz: depth / (n_z + 1) as f64,
            r_outer: geometry.r_outer,
            depth,
        }
    }

    /// Number of interior nodes (the state dimension).
    pub fn n(&self) -> usize {
        self.n_r * self.n_z
    }

    /// Flat state index of the interior node (i, j).
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n_r && j < self.n_z);
        j * self.n_r + i
    }

    /// Inverse of [`Grid::index`].
    pub fn node(&self, flat: usize) -> (usize, usize) {
        debug_assert!(flat < self.n());
        (flat % self.n_r, flat / self.n_r)
    }

    pub fn r(&self, i: usize) -> f64 {
        i as f64 * self.dr
    }

    pub fn z(&self, j: usize) -> f64 {
        (j + 1) as f64 * self.dz
    }

    /// Depth cell represented by interior node j: [z_j − dz/2, z_j + dz/2].
    pub fn z_cell(&self, j: usize) -> (f64, f64) {
        let z = self.z(j);
        (z - 0.5 * self.dz, z + 0.5 * self.dz)
    }

    /// Cross-section area represented by radial node i (annulus midpoint
    /// cell; a disc of radius dr/2 at the axis).
    pub fn radial_area(&self, i: usize) -> f64 {
        let (lo, hi) = self.radial_cell(i);
        std::f64::consts::PI * (hi * hi - lo * lo)
    }

    /// Radial cell [max(r_i − dr/2, 0), r_i + dr/2] of node i.
    pub fn radial_cell(&self, i: usize) -> (f64, f64) {
        let r = self.r(i);
        ((r - 0.5 * self.dr).max(0.0), r + 0.5 * self.dr)
    }

    /// Fraction of node i's annulus lying inside the irradiated disc
    /// r ≤ r_inner; area-exact so the deposited power integrates to the
    /// beam power.
    pub fn radial_inner_fraction(&self, i: usize, r_inner: f64) -> f64 {
        let (lo, hi) = self.radial_cell(i);
        let clip_hi = hi.min(r_inner);
        let clip_lo = lo.min(r_inner);
        if clip_hi <= clip_lo {
            return 0.0;
        }
        (clip_hi * clip_hi - clip_lo * clip_lo) / (hi * hi - lo * lo)
    }

    /// Largest cell extent; halves under uniform refinement.
    pub fn max_cell_size(&self) -> f64 {
        self.dr.max(self.dz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn interior_node_count_is_deterministic() {
        let geom = Geometry::default();
        let grid = build_grid(&geom, 30, 60).unwrap();
        assert_eq!(grid.n(), 30 * 60);
        // flat index round trip
        for flat in [0usize, 17, 29, 30, 1799] {
            let (i, j) = grid.node(flat);
            assert_eq!(grid.index(i, j), flat);
        }
    }

    #[test]
    fn invalid_geometry_is_a_configuration_error() {
        let geom = Geometry {
            r_inner: 2.0e-3,
            ..Geometry::default()
        };
        assert!(build_grid(&geom, 30, 60).is_err());
    }

    #[test]
    fn refining_halves_the_max_cell_size() {
        let geom = Geometry::default();
        let coarse = build_grid(&geom, 30, 60).unwrap();
        let fine = build_grid(&geom, 60, 121).unwrap();
        // dr halves exactly; dz: depth/61 -> depth/122
        assert_relative_eq!(fine.dr, coarse.dr / 2.0, max_relative = 1e-14);
        assert_relative_eq!(fine.dz, coarse.dz / 2.0, max_relative = 1e-14);
        assert_relative_eq!(
            fine.max_cell_size(),
            coarse.max_cell_size() / 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn resolution_preconditions_enforced() {
        let geom = Geometry::default();
        assert!(build_grid(&geom, 3, 60).is_err());
        assert!(build_grid(&geom, 30, 5).is_err());
    }

    #[test]
    fn radial_areas_tile_the_disc() {
        let geom = Geometry::default();
        let grid = build_grid(&geom, 30, 60).unwrap();
        let total: f64 = (0..grid.n_r).map(|i| grid.radial_area(i)).sum();
        // interior cells cover [0, R - dr/2]
        let r_edge = grid.r_outer - 0.5 * grid.dr;
        assert_relative_eq!(
            total,
            std::f64::consts::PI * r_edge * r_edge,
            max_relative = 1e-12
        );
    }

    #[test]
    fn inner_fraction_integrates_to_beam_area() {
        let geom = Geometry::default();
        let grid = build_grid(&geom, 30, 60).unwrap();
        let total: f64 = (0..grid.n_r)
            .map(|i| grid.radial_area(i) * grid.radial_inner_fraction(i, geom.r_inner))
            .sum();
        assert_relative_eq!(
            total,
            std::f64::consts::PI * geom.r_inner * geom.r_inner,
            max_relative = 1e-12
        );
    }
}
