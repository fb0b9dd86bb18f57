//! Full-order axisymmetric heat-diffusion model with Lambert–Beer laser
//! source and volume/peak temperature outputs.

mod grid;
mod model;
mod types;

pub use grid::{build_grid, Grid};
pub use model::{
    assemble_input_vector, assemble_peak_output, assemble_system_matrix, assemble_vol_output,
    input_entry_dual, radial_mean_weight, vol_depth_weight_dual, vol_output_entry_dual,
    FullOrderModel,
};
pub use types::{
    AbsorptionProfile, DepthAbsorption, Geometry, MaterialConstants, VolWeightSign,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical error: {0}")]
    Numerical(String),
}
