//! Midpoint-based explicit (ME) discretizations of nonlinear second-derivative
//! terms `∂x(μ ∂φ/∂x)` and `∂x(μ ∂φ/∂y)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`coeffs`] – exact rational coefficient sets and their Taylor-moment derivation,
//! * [`operators`] – assembly of the straight/mixed operators on uniform grids,
//! * [`spectral`] – modified wavenumber analysis of the assembled operators,
//! * [`optimizer`] – brute-force search over the free leading-error parameters,
//! * [`timeint`] – TVD RK3 stepping and the explicit time-step policy,
//! * [`pde_suite`] – order-of-accuracy studies and the nonlinear diffusion benchmark.

pub mod coeffs;
mod error;
pub mod exact;
pub mod operators;
pub mod optimizer;
pub mod pde_suite;
pub mod spectral;
pub mod timeint;

pub use coeffs::{SchemeId, TermKind, Variant};
pub use error::{Error, Result};
