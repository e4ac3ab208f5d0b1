//! Frequency sweeps fanned out over a rayon pool.
//!
//! Each grid point is evaluated on its own, and results are collected by grid
//! index, so thread count never shows up in the output.

use rayon::prelude::*;
use squeezesim_core::{
    squeezing_after_cavity, CavityParams, DetectionChain, MechanicalMode, OptomechCoupling,
    SidebandPair, SpectrumModel, SpectrumResult,
};

/// Environment variable capping the number of sweep worker threads.
pub const THREADS_ENV: &str = "SQUEEZESIM_THREADS";

/// Worker count from `SQUEEZESIM_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Inputs shared by every grid point of one spectrum run.
#[derive(Debug, Clone)]
pub struct SweepSetup<'a> {
    pub r: f64,
    pub carrier_alpha: f64,
    pub cavity: CavityParams,
    pub modes: &'a [MechanicalMode],
    pub coupling: OptomechCoupling,
    pub chain: &'a DetectionChain,
}

impl SweepSetup<'_> {
    /// Sideband pair reaching the detector at `omega`: prepared squeezing
    /// filtered by the resonator.
    pub fn pair_at(&self, omega: f64) -> squeezesim_core::Result<SidebandPair> {
        let pair = SidebandPair::prepare(omega, self.r, self.carrier_alpha)?;
        squeezing_after_cavity(&pair, &self.cavity)
    }

    pub fn run(
        &self,
        grid: &[f64],
        threads: Option<usize>,
    ) -> squeezesim_core::Result<SpectrumResult> {
        if grid.is_empty() {
            return Err(squeezesim_core::Error::EmptyGrid);
        }
        let model = SpectrumModel::new(|w| self.pair_at(w), self.modes, self.coupling, self.chain);
        let eval = || {
            grid.par_iter()
                .map(|&w| model.point(w))
                .collect::<squeezesim_core::Result<Vec<_>>>()
        };
        let points = match threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool")
                .install(eval),
            None => eval(),
        }?;
        Ok(SpectrumResult::from_points(points))
    }
}
