//! The two-mode sideband picture of a phase-modulated carrier.
//!
//! Homodyne detection at frequency `Ω` measures the upper (`ω₀ + Ω`) and lower
//! (`ω₀ − Ω`) sidebands jointly. At LO angle `θ` the detected photocurrent has a
//! cosine part `x₊(θ) + x₋(θ)` and a sine part `p₊(θ) − p₋(θ)`, where
//! `x(θ) = x cos θ + p sin θ` and `p(θ) = p cos θ − x sin θ`. The measured
//! variance in SNU is the average of the two parts divided by two, so vacuum
//! sidebands read exactly 1. At `θ = π/2` this is the phase-quadrature
//! combination `(V(p₊ + p₋) + V(x₊ − x₋)) / 4`.

use alloc::vec;
use alloc::vec::Vec;

use crate::gaussian::{GaussianState, QuadratureForm};
use crate::{check_non_negative, check_positive, Error, Result};

pub const UPPER: usize = 0;
pub const LOWER: usize = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SidebandPair {
    omega: f64,
    state: GaussianState,
    carrier_alpha: f64,
}

impl SidebandPair {
    pub fn new(omega: f64, state: GaussianState, carrier_alpha: f64) -> Result<Self> {
        check_positive("sideband frequency omega", omega)?;
        check_non_negative("carrier amplitude alpha", carrier_alpha)?;
        if state.n_modes() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: state.n_modes(),
            });
        }
        Ok(Self {
            omega,
            state,
            carrier_alpha,
        })
    }

    /// Phase-squeezed vacuum sidebands: a two-mode squeezed vacuum whose joint
    /// phase-quadrature variance is `e^(-2r)`. `r = 0` gives vacuum sidebands.
    pub fn prepare(omega: f64, r: f64, carrier_alpha: f64) -> Result<Self> {
        let state = GaussianState::vacuum(2)?.two_mode_squeeze(UPPER, LOWER, r)?;
        Self::new(omega, state, carrier_alpha)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }

    pub fn carrier_alpha(&self) -> f64 {
        self.carrier_alpha
    }

    pub(crate) fn with_parts(&self, state: GaussianState, carrier_alpha: f64) -> Self {
        Self {
            omega: self.omega,
            state,
            carrier_alpha,
        }
    }

    /// Joint homodyne variance at LO angle `theta`, in SNU.
    pub fn joint_quadrature_variance(&self, theta: f64) -> f64 {
        let (cos_part, sin_part) = joint_forms(theta);
        let v = |q: &QuadratureForm| {
            self.state
                .quadrature_variance(q)
                .expect("sideband pair always has two modes")
        };
        0.25 * (v(&cos_part) + v(&sin_part))
    }

    /// `(V(X₂⁺ + X₂⁻) + V(X₁⁺ − X₁⁻)) / 4`.
    pub fn joint_phase_variance(&self) -> f64 {
        self.joint_quadrature_variance(core::f64::consts::FRAC_PI_2)
    }

    /// `(V(X₁⁺ + X₁⁻) + V(X₂⁺ − X₂⁻)) / 4`.
    pub fn joint_amplitude_variance(&self) -> f64 {
        self.joint_quadrature_variance(0.0)
    }

    /// Signal amplitude in the cosine part of the phase-quadrature photocurrent,
    /// normalized like the variance: `(⟨p₊⟩ + ⟨p₋⟩) / 2`.
    pub fn joint_phase_mean(&self) -> f64 {
        let m = self.state.mean();
        0.5 * (m[1] + m[3])
    }

    pub fn apply_symmetric_loss(&self, eta: f64) -> Result<Self> {
        let state = self.state.loss(UPPER, eta)?.loss(LOWER, eta)?;
        Ok(self.with_parts(state, libm::sqrt(eta) * self.carrier_alpha))
    }

    /// `(θ, V(θ))` for each requested LO angle.
    pub fn homodyne_arc(&self, thetas: &[f64]) -> Vec<(f64, f64)> {
        thetas
            .iter()
            .map(|&t| (t, self.joint_quadrature_variance(t)))
            .collect()
    }
}

/// Cosine and sine parts of the joint quadrature at LO angle `theta`.
fn joint_forms(theta: f64) -> (QuadratureForm, QuadratureForm) {
    let (c, s) = (libm::cos(theta), libm::sin(theta));
    let cos_part = vec![c, s, c, s];
    let sin_part = vec![-s, c, s, -c];
    (
        QuadratureForm::new(cos_part).expect("unit-norm form"),
        QuadratureForm::new(sin_part).expect("unit-norm form"),
    )
}
