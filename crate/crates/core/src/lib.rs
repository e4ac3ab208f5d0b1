//! Gaussian-state algebra and optomechanical transduction models for
//! squeezed-light-enhanced displacement sensing.
//!
//! Everything in this crate is a pure value-to-value computation: states are
//! immutable, every operation returns a fresh value, and there is no global
//! state. The crate builds without `std` (it only needs `alloc`), so the same
//! numerics can run on an embedded controller or inside the `squeezesim` CLI.
//!
//! ## Conventions
//!
//! - Quadratures are `x = a + a†` and `p = -i(a - a†)`, so the vacuum variance
//!   is exactly 1 (shot-noise units, SNU). All decibel values are
//!   `10·log10(V)` relative to that level.
//! - Phase-space vectors are ordered `x₁, p₁, x₂, p₂, …`.
//! - The squeeze parameter `r` is an amplitude: a squeezed quadrature has
//!   variance `e^(-2r)`.
//! - A sideband pair keeps the upper sideband `ω₀ + Ω` in mode 0 and the lower
//!   sideband `ω₀ − Ω` in mode 1. The two-mode squeezed vacuum has
//!   cross-covariance `sinh(2r)·diag(1, -1)`.
//! - Frequencies are angular (rad/s) throughout.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod detection;
pub mod gaussian;
mod linalg;
pub mod optomech;
pub mod sideband;
pub mod spectrum;
pub mod sql;

pub use detection::{
    db_to_r, db_to_v, enhancement_db, r_to_db, v_to_db, DetectionChain, Efficiency, SpectrumResult,
};
pub use gaussian::{GaussianState, QuadratureForm};
pub use optomech::{
    cavity_transmission, squeezing_after_cavity, transduce, CavityParams, MechanicalMode,
    OptomechCoupling,
};
pub use sideband::SidebandPair;
pub use spectrum::{transduced_spectrum, SpectrumModel, SpectrumPoint};
pub use sql::{sql_optimum, sql_total_noise, SqlNoise, SqlOptimum};

/// Tolerance below 1 that a symplectic eigenvalue may reach before a state is
/// declared unphysical.
pub const PHYSICALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("a Gaussian state needs at least one mode")]
    ZeroModes,
    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { index: usize, n_modes: usize },
    #[error("a two-mode operation needs distinct modes, got {0} twice")]
    SameMode(usize),
    #[error("{name} must lie in [0, 1], got {value}")]
    OutOfUnitInterval { name: &'static str, value: f64 },
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("quadrature form has no nonzero coefficient")]
    ZeroQuadrature,
    #[error("covariance matrix is not symmetric (max deviation {0:e})")]
    Asymmetric(f64),
    #[error("unphysical state: smallest symplectic eigenvalue {0} < 1")]
    Unphysical(f64),
    #[error("external coupling {kappa_ex} exceeds total linewidth {kappa}")]
    OvercoupledBeyondTotal { kappa_ex: f64, kappa: f64 },
    #[error("sideband filtering assumes resonant probing, got detuning {0}")]
    Detuned(f64),
    #[error("frequency grid is empty")]
    EmptyGrid,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfUnitInterval { name, value })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<f64> {
    check_finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Negative { name, value })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    check_finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}
