//! Homodyne detection chain and decibel bookkeeping.

use alloc::string::String;
use alloc::vec::Vec;

use crate::spectrum::SpectrumPoint;
use crate::{check_finite, check_non_negative, check_positive, check_unit, Result};

/// SNU → dB relative to shot noise.
pub fn v_to_db(v: f64) -> f64 {
    10.0 * libm::log10(v)
}

pub fn db_to_v(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// Squeezed-quadrature level of squeeze parameter `r`, in dB.
pub fn r_to_db(r: f64) -> f64 {
    v_to_db(libm::exp(-2.0 * r))
}

/// Inverse of [`r_to_db`] for `db ≤ 0`.
pub fn db_to_r(db: f64) -> f64 {
    -0.5 * libm::log(db_to_v(db))
}

/// Floor change from coherent to squeezed probing; negative is an improvement.
pub fn enhancement_db(coherent_floor: f64, squeezed_floor: f64) -> f64 {
    v_to_db(squeezed_floor / coherent_floor)
}

/// One efficiency stage of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Efficiency {
    pub label: String,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionChain {
    efficiencies: Vec<Efficiency>,
    lo_amplitude: f64,
    lo_phase: f64,
    dark_noise_snu: f64,
}

impl Default for DetectionChain {
    /// Lossless, noiseless, phase-quadrature detection with unit LO amplitude.
    fn default() -> Self {
        Self {
            efficiencies: Vec::new(),
            lo_amplitude: 1.0,
            lo_phase: core::f64::consts::FRAC_PI_2,
            dark_noise_snu: 0.0,
        }
    }
}

impl DetectionChain {
    pub fn new(lo_amplitude: f64, lo_phase: f64, dark_noise_snu: f64) -> Result<Self> {
        check_positive("LO amplitude beta", lo_amplitude)?;
        check_finite("LO phase", lo_phase)?;
        check_non_negative("dark noise", dark_noise_snu)?;
        Ok(Self {
            efficiencies: Vec::new(),
            lo_amplitude,
            lo_phase,
            dark_noise_snu,
        })
    }

    pub fn with_stage(mut self, label: impl Into<String>, eta: f64) -> Result<Self> {
        check_unit("efficiency eta", eta)?;
        self.efficiencies.push(Efficiency {
            label: label.into(),
            eta,
        });
        Ok(self)
    }

    /// Adds a homodyne visibility stage; the mode-overlap power penalty is
    /// `visibility²`.
    pub fn with_visibility(self, visibility: f64) -> Result<Self> {
        check_unit("visibility", visibility)?;
        self.with_stage("visibility", visibility * visibility)
    }

    pub fn with_dark_noise_snu(mut self, dark_noise_snu: f64) -> Result<Self> {
        self.dark_noise_snu = check_non_negative("dark noise", dark_noise_snu)?;
        Ok(self)
    }

    pub fn with_dark_noise_db(self, dark_db: f64) -> Result<Self> {
        check_finite("dark noise level", dark_db)?;
        self.with_dark_noise_snu(db_to_v(dark_db))
    }

    pub fn stages(&self) -> &[Efficiency] {
        &self.efficiencies
    }

    pub fn lo_amplitude(&self) -> f64 {
        self.lo_amplitude
    }

    pub fn lo_phase(&self) -> f64 {
        self.lo_phase
    }

    pub fn dark_noise_snu(&self) -> f64 {
        self.dark_noise_snu
    }

    pub fn effective_efficiency(&self) -> f64 {
        self.efficiencies.iter().map(|e| e.eta).product()
    }

    /// `η·v_in + (1 − η) + dark`. Electronic dark noise is added after the
    /// optical losses and is not attenuated by them.
    pub fn measured_variance(&self, v_in: f64) -> f64 {
        let eta = self.effective_efficiency();
        eta * v_in + (1.0 - eta) + self.dark_noise_snu
    }

    /// Photocurrent power before normalization to shot noise, `β²·V`.
    pub fn raw_power(&self, v_snu: f64) -> f64 {
        self.lo_amplitude * self.lo_amplitude * v_snu
    }
}

/// Noise spectrum sampled on a frequency grid, all powers in SNU.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub grid: Vec<f64>,
    pub floor_snu: Vec<f64>,
    pub signal_snu: Vec<f64>,
    pub total_snu: Vec<f64>,
    pub total_db: Vec<f64>,
}

impl SpectrumResult {
    pub fn from_points<I: IntoIterator<Item = SpectrumPoint>>(points: I) -> Self {
        let points = points.into_iter();
        let cap = points.size_hint().0;
        let mut out = Self {
            grid: Vec::with_capacity(cap),
            floor_snu: Vec::with_capacity(cap),
            signal_snu: Vec::with_capacity(cap),
            total_snu: Vec::with_capacity(cap),
            total_db: Vec::with_capacity(cap),
        };
        for p in points {
            out.grid.push(p.omega);
            out.floor_snu.push(p.floor);
            out.signal_snu.push(p.signal);
            out.total_snu.push(p.total);
            out.total_db.push(p.total_db);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = SpectrumPoint> + '_ {
        (0..self.len()).map(move |i| SpectrumPoint {
            omega: self.grid[i],
            floor: self.floor_snu[i],
            signal: self.signal_snu[i],
            total: self.total_snu[i],
            total_db: self.total_db[i],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn db_helpers() {
        assert_eq!(v_to_db(1.0), 0.0);
        assert_abs_diff_eq!(r_to_db(0.138), -1.199, epsilon = 5e-4);
        assert_abs_diff_eq!(db_to_v(-0.72), 0.8472, epsilon = 5e-5);
        assert_abs_diff_eq!(db_to_r(r_to_db(0.138)), 0.138, epsilon = 1e-14);
        assert_eq!(enhancement_db(1.0, 1.0), 0.0);
        assert_eq!(enhancement_db(0.9, 0.9), 0.0);
        assert_abs_diff_eq!(enhancement_db(1.0, 0.8472), -0.72, epsilon = 5e-4);
    }

    #[test]
    fn efficiency_composition() {
        let vis = DetectionChain::default().with_visibility(0.98).unwrap();
        assert_abs_diff_eq!(vis.effective_efficiency(), 0.9604, epsilon = 1e-15);
        let both = vis.with_stage("quantum efficiency", 0.87).unwrap();
        assert_abs_diff_eq!(both.effective_efficiency(), 0.835548, epsilon = 1e-12);
        assert_eq!(DetectionChain::default().effective_efficiency(), 1.0);
    }

    #[test]
    fn measured_variance_cases() {
        let chain = DetectionChain::default()
            .with_stage("a", 0.3)
            .unwrap()
            .with_stage("b", 0.8)
            .unwrap();
        assert_abs_diff_eq!(chain.measured_variance(1.0), 1.0, epsilon = 1e-15);

        let dark = DetectionChain::default().with_dark_noise_db(-25.0).unwrap();
        assert_abs_diff_eq!(dark.measured_variance(1.0) - 1.0, 0.00316, epsilon = 5e-6);

        let unattributed = DetectionChain::default()
            .with_stage("unattributed", 0.633)
            .unwrap();
        let v = unattributed.measured_variance(0.7588);
        assert_abs_diff_eq!(v, 0.8473, epsilon = 5e-5);
        assert_abs_diff_eq!(v_to_db(v), -0.72, epsilon = 0.005);
    }

    #[test]
    fn chain_validation() {
        assert!(DetectionChain::default().with_stage("x", 1.2).is_err());
        assert!(DetectionChain::default().with_visibility(-0.1).is_err());
        assert!(DetectionChain::new(0.0, 0.0, 0.0).is_err());
        assert!(DetectionChain::new(1.0, 0.0, -1e-3).is_err());
    }

    #[test]
    fn raw_power_scales_with_lo() {
        let chain = DetectionChain::new(3.0, 0.0, 0.0).unwrap();
        assert_eq!(chain.raw_power(0.5), 4.5);
    }
}
