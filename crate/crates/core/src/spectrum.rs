//! Transduced displacement spectra on top of the measured noise floor.
//!
//! At each analysis frequency `Ω` the floor is the detected joint phase
//! variance of the sideband pair, and the mechanical signal is
//! `η · 2α² · (g₀/x_zpf)² · Σ S_x(Ω) / Ω²`: the modulation index per unit
//! bandwidth, read out on both sidebands through the chain efficiency `η`.
//! Grid points are evaluated independently of one another, so any evaluation
//! order gives bitwise identical results.

use alloc::vec::Vec;

use crate::detection::{v_to_db, DetectionChain, SpectrumResult};
use crate::optomech::{MechanicalMode, OptomechCoupling};
use crate::sideband::SidebandPair;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub omega: f64,
    pub floor: f64,
    pub signal: f64,
    pub total: f64,
    pub total_db: f64,
}

/// Everything needed to evaluate the spectrum at one frequency.
pub struct SpectrumModel<'a, F> {
    pair_factory: F,
    modes: &'a [MechanicalMode],
    coupling: OptomechCoupling,
    chain: &'a DetectionChain,
}

impl<'a, F> SpectrumModel<'a, F>
where
    F: Fn(f64) -> Result<SidebandPair>,
{
    pub fn new(
        pair_factory: F,
        modes: &'a [MechanicalMode],
        coupling: OptomechCoupling,
        chain: &'a DetectionChain,
    ) -> Self {
        Self {
            pair_factory,
            modes,
            coupling,
            chain,
        }
    }

    /// Evaluates the floor and signal at `omega`. Fails if the factory fails or
    /// hands back an unphysical state.
    pub fn point(&self, omega: f64) -> Result<SpectrumPoint> {
        let pair = (self.pair_factory)(omega)?;
        pair.state().check_physical()?;
        let floor = self.chain.measured_variance(pair.joint_phase_variance());

        let sx: f64 = self.modes.iter().map(|m| m.psd(omega)).sum();
        let pull = self.coupling.frequency_pull();
        let alpha = pair.carrier_alpha();
        let signal = self.chain.effective_efficiency() * 2.0 * alpha * alpha * pull * pull * sx
            / (omega * omega);

        let total = floor + signal;
        Ok(SpectrumPoint {
            omega,
            floor,
            signal,
            total,
            total_db: v_to_db(total),
        })
    }
}

/// Serial evaluation of the spectrum over `grid`.
pub fn transduced_spectrum<F>(
    pair_factory: F,
    modes: &[MechanicalMode],
    coupling: OptomechCoupling,
    chain: &DetectionChain,
    grid: &[f64],
) -> Result<SpectrumResult>
where
    F: Fn(f64) -> Result<SidebandPair>,
{
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let model = SpectrumModel::new(pair_factory, modes, coupling, chain);
    let points = grid
        .iter()
        .map(|&w| model.point(w))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumResult::from_points(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    fn grid() -> Vec<f64> {
        (0..50).map(|k| 2.0 * PI * (4e6 + 1e5 * k as f64)).collect()
    }

    fn coupling() -> OptomechCoupling {
        OptomechCoupling::new(2.0 * PI * 1e4, 1e-15).unwrap()
    }

    #[test]
    fn empty_grid_rejected() {
        let chain = DetectionChain::default();
        let r = transduced_spectrum(
            |w| SidebandPair::prepare(w, 0.0, 1.0),
            &[],
            coupling(),
            &chain,
            &[],
        );
        assert_eq!(r, Err(Error::EmptyGrid));
    }

    #[test]
    fn vacuum_floor_is_flat_zero_db() {
        let chain = DetectionChain::default().with_stage("t", 0.4).unwrap();
        let s = transduced_spectrum(
            |w| SidebandPair::prepare(w, 0.0, 1e7),
            &[],
            coupling(),
            &chain,
            &grid(),
        )
        .unwrap();
        for p in s.points() {
            assert_abs_diff_eq!(p.total_db, 0.0, epsilon = 1e-12);
            assert_eq!(p.signal, 0.0);
        }
    }

    #[test]
    fn squeezed_floor_after_unattributed_loss() {
        let chain = DetectionChain::default()
            .with_stage("unattributed", 0.633)
            .unwrap();
        let s = transduced_spectrum(
            |w| SidebandPair::prepare(w, 0.138, 1e7),
            &[],
            coupling(),
            &chain,
            &grid(),
        )
        .unwrap();
        for p in s.points() {
            assert_abs_diff_eq!(p.total_db, -0.72, epsilon = 0.01);
        }
    }

    #[test]
    fn peak_to_floor_linear_in_carrier_power() {
        let chain = DetectionChain::default();
        let mode = MechanicalMode::new(2.0 * PI * 5e6, 2.0 * PI * 5e3, 1e-36).unwrap();
        let modes = [mode];
        let at = |alpha: f64| {
            let model = SpectrumModel::new(
                |w| SidebandPair::prepare(w, 0.0, alpha),
                &modes,
                coupling(),
                &chain,
            );
            let p = model.point(mode.omega_m).unwrap();
            p.signal / p.floor
        };
        let one = at(1e6);
        let two = at(1e6 * libm::sqrt(2.0));
        assert!((two / one - 2.0).abs() < 1e-12);
    }
}
