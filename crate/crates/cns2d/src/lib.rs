//! Two-dimensional compressible Navier–Stokes solver on uniform Cartesian
//! grids, used to exercise the midpoint viscous operators on the shear-layer
//! and shock benchmarks.
//!
//! Nondimensional form: `p γ M² = ρ T`, viscous fluxes scaled by `1/Re`,
//! heat conductivity `κ = μ / (M² (γ−1) Pr)`.

pub mod cases;
pub mod diagnostics;
mod error;
pub mod inviscid;
pub mod solver;
pub mod state;
pub mod viscous;

pub use cases::{CaseConfig, CaseKind, InviscidScheme};
pub use error::{Error, Result};
pub use solver::{run_case, theta_stability_scan, FilterPolicy, RunOutcome, ThetaScan};
pub use state::{CnsState, Grid, GAMMA};
pub use viscous::{ViscosityLaw, ViscousModel};
