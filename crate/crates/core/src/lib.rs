//! Core library for learning non-stationary dynamics and forecasting tipping
//! points from physics-residual conformity scores.
//!
//! The crate is organized around [`grid::GridFunction`], a sampled space-time
//! function on a uniform grid, which is the common currency between the
//! reference solvers ([`dynamics`]), the operator-learning models ([`model`]),
//! the physics residuals ([`physics`]) and the conformal calibration layer
//! ([`conformal`]).

pub mod autograd;
pub mod checkpoint;
pub mod conformal;
pub mod dynamics;
pub mod ews;
pub mod fft;
pub mod grid;
pub mod model;
pub mod physics;
pub mod store;
pub mod train;

pub use grid::{AxisDomain, GridAxis, GridFunction, SpectralCoeffs};
