//! Simulation toolkit for temperature-controlled retinal laser heating.
//!
//! The crate covers the whole control pipeline at desk scale:
//!
//! * [`physical`] — full-order axisymmetric heat-diffusion model with a
//!   Lambert–Beer laser source and the volume/peak temperature outputs.
//! * [`mor`] — parametric model order reduction (POD global basis plus
//!   discrete empirical interpolation) down to six states.
//! * [`ekf`] — joint state/parameter estimation with an extended Kalman
//!   filter on the parameter-augmented reduced model.
//! * [`qp`] — embedded operator-splitting QP solver with warm starts and
//!   in-place vector/matrix updates.
//! * [`mpc`] — the receding-horizon controller: reference-control inversion,
//!   sparse OCP assembly and per-step partial updates.
//! * [`harness`] — scenario-driven closed-loop simulator, latency profiler
//!   and trace export behind the `lasermpc` CLI.

pub mod dual;
pub mod ekf;
pub mod harness;
pub mod mor;
pub mod mpc;
pub mod physical;
pub mod qp;
pub mod sparse;
