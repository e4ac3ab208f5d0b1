//! Optomechanical transduction: mechanical modes, the cavity sideband filter and
//! the phase modulation the mechanics imprints on the probe.

use num_complex::Complex64;

use crate::sideband::{SidebandPair, LOWER, UPPER};
use crate::{check_finite, check_non_negative, check_positive, Error, Result};

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// One Lorentzian mechanical vibration mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalMode {
    /// Resonance frequency Ωₘ, rad/s.
    pub omega_m: f64,
    /// Linewidth Γₘ (FWHM), rad/s.
    pub gamma_m: f64,
    /// Displacement PSD at resonance, m²/Hz.
    pub s_x_peak: f64,
}

impl MechanicalMode {
    pub fn new(omega_m: f64, gamma_m: f64, s_x_peak: f64) -> Result<Self> {
        check_positive("mechanical frequency omega_m", omega_m)?;
        check_positive("mechanical linewidth gamma_m", gamma_m)?;
        check_non_negative("peak displacement PSD", s_x_peak)?;
        Ok(Self {
            omega_m,
            gamma_m,
            s_x_peak,
        })
    }

    /// Thermally driven mode of effective mass `mass` (kg) at `temperature` (K).
    ///
    /// Uses the single-sided per-Hz thermal spectrum, whose peak is
    /// `4 k_B T / (m Γₘ Ωₘ²)` and whose integral over frequency is
    /// `k_B T / (m Ωₘ²)`.
    pub fn thermal(omega_m: f64, gamma_m: f64, mass: f64, temperature: f64) -> Result<Self> {
        check_positive("mechanical frequency omega_m", omega_m)?;
        check_positive("mechanical linewidth gamma_m", gamma_m)?;
        check_positive("effective mass", mass)?;
        check_non_negative("temperature", temperature)?;
        let peak = 4.0 * BOLTZMANN * temperature / (mass * gamma_m * omega_m * omega_m);
        Self::new(omega_m, gamma_m, peak)
    }

    /// `S_x(Ω) = S_peak · Γₘ²Ωₘ² / ((Ωₘ² − Ω²)² + Γₘ²Ω²)`.
    pub fn psd(&self, omega: f64) -> f64 {
        let wm2 = self.omega_m * self.omega_m;
        let g2 = self.gamma_m * self.gamma_m;
        let w2 = omega * omega;
        let detune = wm2 - w2;
        self.s_x_peak * g2 * wm2 / (detune * detune + g2 * w2)
    }
}

/// Taper-coupled (all-pass) optical resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Total linewidth κ (FWHM), rad/s.
    pub kappa: f64,
    /// External (taper) coupling rate κ_ex, rad/s.
    pub kappa_ex: f64,
    /// Laser–cavity detuning Δ, rad/s.
    pub detuning: f64,
}

impl CavityParams {
    pub fn new(kappa: f64, kappa_ex: f64, detuning: f64) -> Result<Self> {
        check_positive("cavity linewidth kappa", kappa)?;
        check_non_negative("external coupling kappa_ex", kappa_ex)?;
        check_finite("detuning", detuning)?;
        if kappa_ex > kappa {
            return Err(Error::OvercoupledBeyondTotal { kappa_ex, kappa });
        }
        Ok(Self {
            kappa,
            kappa_ex,
            detuning,
        })
    }

    pub fn critically_coupled(kappa: f64) -> Result<Self> {
        Self::new(kappa, 0.5 * kappa, 0.0)
    }

    /// `κ_ex / κ`: 0 decoupled, ½ critical, 1 fully over-coupled.
    pub fn coupling_ratio(&self) -> f64 {
        self.kappa_ex / self.kappa
    }
}

/// Vacuum coupling rate together with the length that makes δx dimensionless.
///
/// `ξ = g₀ δx / Ωₘ` only makes sense once `δx` is expressed in units of the
/// zero-point fluctuation `x_zpf`, so the conversion is explicit here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptomechCoupling {
    /// Vacuum optomechanical coupling rate g₀, rad/s.
    pub g0: f64,
    /// Zero-point length scale, m.
    pub x_zpf: f64,
}

impl OptomechCoupling {
    pub fn new(g0: f64, x_zpf: f64) -> Result<Self> {
        check_non_negative("coupling rate g0", g0)?;
        check_positive("zero-point length x_zpf", x_zpf)?;
        Ok(Self { g0, x_zpf })
    }

    /// Frequency pull per unit displacement, `g₀ / x_zpf` (rad/s per m).
    pub fn frequency_pull(&self) -> f64 {
        self.g0 / self.x_zpf
    }

    /// Modulation index `ξ = g₀ (δx / x_zpf) / Ωₘ`.
    pub fn modulation_index(&self, delta_x: f64, omega_m: f64) -> Result<f64> {
        check_finite("displacement amplitude", delta_x)?;
        check_positive("mechanical frequency omega_m", omega_m)?;
        Ok(self.g0 * (delta_x / self.x_zpf) / omega_m)
    }
}

/// Imprints a phase modulation of index `xi`: both sideband modes are displaced
/// by `ξα/√2` along their phase quadrature. The covariance is untouched.
pub fn transduce(pair: &SidebandPair, xi: f64) -> Result<SidebandPair> {
    check_non_negative("modulation index xi", xi)?;
    let amp = xi * pair.carrier_alpha() * core::f64::consts::FRAC_1_SQRT_2;
    let state = pair
        .state()
        .displace(UPPER, 0.0, amp)?
        .displace(LOWER, 0.0, amp)?;
    Ok(pair.with_parts(state, pair.carrier_alpha()))
}

/// Field transmission past the resonator at offset `omega` from the carrier,
/// `t(Ω) = 1 − κ_ex / (κ/2 − i(Δ + Ω))`.
pub fn cavity_transmission(cavity: &CavityParams, omega: f64) -> Complex64 {
    let denom = Complex64::new(0.5 * cavity.kappa, -(cavity.detuning + omega));
    Complex64::new(1.0, 0.0) - cavity.kappa_ex / denom
}

/// Passes both sidebands through the resonator (resonant probing only).
///
/// Each sideband sees a loss channel of efficiency `|t(±Ω)|²` followed by a
/// rotation by `arg t(±Ω)`; the carrier amplitude scales by `|t(0)|`.
pub fn squeezing_after_cavity(pair: &SidebandPair, cavity: &CavityParams) -> Result<SidebandPair> {
    if cavity.detuning != 0.0 {
        return Err(Error::Detuned(cavity.detuning));
    }
    let omega = pair.omega();
    let mut state = pair.state().clone();
    for (mode, offset) in [(UPPER, omega), (LOWER, -omega)] {
        let t = cavity_transmission(cavity, offset);
        let eta = t.norm_sqr().min(1.0);
        state = state.loss(mode, eta)?.phase_rotate(mode, t.arg())?;
    }
    let carrier = cavity_transmission(cavity, 0.0).norm();
    Ok(pair.with_parts(state, carrier * pair.carrier_alpha()))
}
