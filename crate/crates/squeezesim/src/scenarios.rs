//! The four CLI scenarios and their table/CSV renderings.
//!
//! CSV cells use Rust's shortest round-trip float formatting, so identical
//! inputs give identical bytes. Console tables use fixed precision.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use squeezesim_core::{
    enhancement_db, sql_optimum, sql_total_noise, v_to_db, MechanicalMode, SidebandPair,
    SpectrumResult, SqlNoise, SqlOptimum,
};

use crate::budget::{loss_ledger, BudgetReport};
use crate::config::{linspace, Experiment, RunOptions};
use crate::sweep::SweepSetup;

pub const SPECTRUM_HEADER: &str = "omega_hz,floor_snu,signal_snu,total_snu,total_db";

// ---------------------------------------------------------------- characterize

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterizeReport {
    pub detection_hz: f64,
    /// `(θ, V in SNU, V in dB)`.
    pub rows: Vec<(f64, f64, f64)>,
    pub min_db: f64,
    pub max_db: f64,
}

pub fn run_characterize(
    exp: &Experiment,
    opts: RunOptions,
) -> squeezesim_core::Result<CharacterizeReport> {
    let chain = exp.characterization_chain(opts)?;
    let pair = SidebandPair::prepare(exp.detection_omega, exp.r, exp.carrier_alpha)?;
    pair.state().check_physical()?;
    let thetas = linspace(0.0, TAU, exp.arc_points);
    let rows: Vec<(f64, f64, f64)> = pair
        .homodyne_arc(&thetas)
        .into_iter()
        .map(|(t, v)| {
            let measured = chain.measured_variance(v);
            (t, measured, v_to_db(measured))
        })
        .collect();
    let min_db = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let max_db = rows.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
    Ok(CharacterizeReport {
        detection_hz: exp.detection_omega / TAU,
        rows,
        min_db,
        max_db,
    })
}

impl CharacterizeReport {
    pub fn to_console(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "homodyne arc at {:.4} MHz", self.detection_hz / 1e6);
        let _ = writeln!(s, "{:>10} {:>12} {:>10}", "theta_rad", "variance_snu", "db");
        for (t, v, d) in &self.rows {
            let _ = writeln!(s, "{t:>10.6} {v:>12.6} {d:>10.4}");
        }
        let _ = writeln!(s, "min: {:.4} dB", self.min_db);
        let _ = writeln!(s, "max: {:.4} dB", self.max_db);
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("theta_rad,variance_snu,variance_db\n");
        for (t, v, d) in &self.rows {
            let _ = writeln!(s, "{t},{v},{d}");
        }
        s
    }
}

// -------------------------------------------------------------------- spectrum

#[derive(Debug, Clone, PartialEq)]
pub struct PeakRow {
    pub label: String,
    pub omega_m_hz: f64,
    pub index: usize,
    pub omega_hz: f64,
    pub total_snu: f64,
    pub total_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub coherent: SpectrumResult,
    pub squeezed: SpectrumResult,
    /// Grid-averaged floors, SNU, including applied dark noise.
    pub coherent_floor: f64,
    pub squeezed_floor: f64,
    pub dark_snu: f64,
    pub enhancement_db: f64,
    /// Local maxima of the squeezed spectrum nearest each configured mode.
    pub peaks: Vec<PeakRow>,
}

pub fn run_spectrum(
    exp: &Experiment,
    opts: RunOptions,
    threads: Option<usize>,
) -> squeezesim_core::Result<SpectrumReport> {
    let chain = exp.measurement_chain(opts)?;
    let modes: Vec<MechanicalMode> = exp.modes.iter().map(|m| m.mode).collect();
    let setup = |r: f64| SweepSetup {
        r,
        carrier_alpha: exp.carrier_alpha,
        cavity: exp.cavity,
        modes: &modes,
        coupling: exp.coupling,
        chain: &chain,
    };
    let coherent = setup(0.0).run(&exp.grid, threads)?;
    let squeezed = setup(exp.r).run(&exp.grid, threads)?;
    let coherent_floor = mean(&coherent.floor_snu);
    let squeezed_floor = mean(&squeezed.floor_snu);

    let maxima = local_maxima(&squeezed);
    let peaks = exp
        .modes
        .iter()
        .filter_map(|m| {
            let nearest = maxima.iter().copied().min_by(|&a, &b| {
                let da = (squeezed.grid[a] - m.mode.omega_m).abs();
                let db = (squeezed.grid[b] - m.mode.omega_m).abs();
                da.total_cmp(&db)
            })?;
            Some(PeakRow {
                label: m.label.clone(),
                omega_m_hz: m.mode.omega_m / TAU,
                index: nearest,
                omega_hz: squeezed.grid[nearest] / TAU,
                total_snu: squeezed.total_snu[nearest],
                total_db: squeezed.total_db[nearest],
            })
        })
        .collect();

    Ok(SpectrumReport {
        enhancement_db: enhancement_db(coherent_floor, squeezed_floor),
        coherent,
        squeezed,
        coherent_floor,
        squeezed_floor,
        dark_snu: chain.dark_noise_snu(),
        peaks,
    })
}

/// Indices where the total rises above both neighbours and carries signal.
pub fn local_maxima(s: &SpectrumResult) -> Vec<usize> {
    let t = &s.total_snu;
    (0..t.len())
        .filter(|&i| {
            s.signal_snu[i] > 0.0
                && (i == 0 || t[i] > t[i - 1])
                && (i + 1 == t.len() || t[i] >= t[i + 1])
        })
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn spectrum_csv(s: &SpectrumResult) -> String {
    let mut out = String::with_capacity(96 * (s.len() + 1));
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for p in s.points() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.omega / TAU,
            p.floor,
            p.signal,
            p.total,
            p.total_db
        );
    }
    out
}

impl SpectrumReport {
    pub fn to_console(&self) -> String {
        let mut s = String::new();
        let g = &self.squeezed.grid;
        let _ = writeln!(
            s,
            "spectrum: {} points, {:.4} .. {:.4} MHz",
            g.len(),
            g[0] / TAU / 1e6,
            g[g.len() - 1] / TAU / 1e6
        );
        let floors = [
            ("coherent", self.coherent_floor),
            ("squeezed", self.squeezed_floor),
        ];
        for (name, f) in floors {
            let sub = f - self.dark_snu;
            let _ = writeln!(
                s,
                "{name} floor: {f:.6} SNU ({:.4} dB) raw, {sub:.6} SNU ({:.4} dB) dark-subtracted",
                v_to_db(f),
                v_to_db(sub)
            );
        }
        let _ = writeln!(s, "enhancement: {:.4} dB", self.enhancement_db);
        if !self.peaks.is_empty() {
            let _ = writeln!(s, "peaks (squeezed probe):");
            let _ = writeln!(
                s,
                "{:>16} {:>14} {:>14} {:>16} {:>10}",
                "mode", "omega_m_hz", "omega_hz", "total_snu", "total_db"
            );
            for p in &self.peaks {
                let _ = writeln!(
                    s,
                    "{:>16} {:>14.1} {:>14.1} {:>16.6} {:>10.4}",
                    p.label, p.omega_m_hz, p.omega_hz, p.total_snu, p.total_db
                );
            }
        }
        s
    }
}

// ------------------------------------------------------------------------- sql

#[derive(Debug, Clone, PartialEq)]
pub struct SqlReport {
    pub r: f64,
    /// `(N, coherent noise, squeezed noise)`.
    pub rows: Vec<(f64, SqlNoise, SqlNoise)>,
    pub coherent_optimum: SqlOptimum,
    pub squeezed_optimum: SqlOptimum,
}

pub fn run_sql(exp: &Experiment) -> squeezesim_core::Result<SqlReport> {
    let s = &exp.sql;
    let logs = linspace(s.n_min.ln(), s.n_max.ln(), s.points);
    let rows = logs
        .into_iter()
        .map(|l| {
            let n = l.exp();
            Ok((
                n,
                sql_total_noise(n, 0.0, s.a, s.b)?,
                sql_total_noise(n, exp.r, s.a, s.b)?,
            ))
        })
        .collect::<squeezesim_core::Result<Vec<_>>>()?;
    Ok(SqlReport {
        r: exp.r,
        rows,
        coherent_optimum: sql_optimum(0.0, s.a, s.b)?,
        squeezed_optimum: sql_optimum(exp.r, s.a, s.b)?,
    })
}

impl SqlReport {
    pub fn to_console(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
            "n", "imp_coh", "ba_coh", "total_coh", "imp_sq", "ba_sq", "total_sq"
        );
        for (n, c, q) in &self.rows {
            let _ = writeln!(
                s,
                "{n:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e}",
                c.imprecision, c.backaction, c.total, q.imprecision, q.backaction, q.total
            );
        }
        let opt = [
            ("coherent", &self.coherent_optimum),
            ("squeezed", &self.squeezed_optimum),
        ];
        for (name, o) in opt {
            let _ = writeln!(
                s,
                "optimum {name}: n_star = {:.9e}, s_min = {:.9e}",
                o.n_star, o.s_min
            );
        }
        let _ = writeln!(
            s,
            "n_star shift: {:.9} (e^(-2r) = {:.9})",
            self.squeezed_optimum.n_star / self.coherent_optimum.n_star,
            (-2.0 * self.r).exp()
        );
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("probe,n,imprecision,backaction,total\n");
        for (label, pick) in [("coherent", 0usize), ("squeezed", 1)] {
            for (n, c, q) in &self.rows {
                let x = if pick == 0 { c } else { q };
                let _ = writeln!(
                    s,
                    "{label},{n},{},{},{}",
                    x.imprecision, x.backaction, x.total
                );
            }
        }
        s
    }
}

// ---------------------------------------------------------------------- budget

pub fn run_budget(exp: &Experiment, opts: RunOptions) -> BudgetReport {
    loss_ledger(
        exp.r,
        &exp.optical_stages(),
        exp.applied_dark_snu(opts),
        exp.target_floor_db,
    )
}

impl BudgetReport {
    pub fn to_console(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "source: r = {:.6}, {:.4} dB",
            self.source_r, self.source_db
        );
        let _ = writeln!(
            s,
            "{:>20} {:>8} {:>12} {:>10} {:>10}",
            "stage", "eta", "variance_snu", "level_db", "erosion_db"
        );
        for row in &self.rows {
            let _ = writeln!(
                s,
                "{:>20} {:>8.4} {:>12.6} {:>10.4} {:>10.4}",
                row.stage, row.eta, row.variance_snu, row.level_db, row.erosion_db
            );
        }
        let _ = writeln!(
            s,
            "output: {:.6} SNU, {:.4} dB",
            self.output_snu, self.output_db
        );
        if let Some(t) = &self.target {
            let _ = writeln!(s, "target floor: {:.4} dB", t.target_db);
            match t.residual_eta {
                Some(eta) => {
                    let _ = writeln!(s, "unattributed efficiency to reach target: {eta:.4}");
                }
                None => {
                    let _ = writeln!(s, "unattributed efficiency to reach target: unreachable");
                }
            }
            match t.required_source_r {
                Some(r) => {
                    let _ = writeln!(
                        s,
                        "source needed through listed stages: r = {r:.6} ({:.4} dB)",
                        squeezesim_core::r_to_db(r)
                    );
                }
                None => {
                    let _ = writeln!(s, "source needed through listed stages: unreachable");
                }
            }
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("stage,eta,variance_snu,level_db,erosion_db\n");
        let _ = writeln!(
            s,
            "source,1,{},{},0",
            (-2.0 * self.source_r).exp(),
            self.source_db
        );
        for row in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                csv_field(&row.stage),
                row.eta,
                row.variance_snu,
                row.level_db,
                row.erosion_db
            );
        }
        s
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}
