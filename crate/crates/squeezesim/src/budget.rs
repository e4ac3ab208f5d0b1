//! Loss ledger: how much squeezing each stage of the chain erodes.

use squeezesim_core::{r_to_db, v_to_db};

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetRow {
    pub stage: String,
    pub eta: f64,
    /// Variance after this stage, SNU.
    pub variance_snu: f64,
    pub level_db: f64,
    /// Change in level caused by this stage, dB (positive = squeezing lost).
    pub erosion_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetAnalysis {
    pub target_db: f64,
    /// Extra efficiency after the listed stages that brings the output to the
    /// target, or `None` if no efficiency in `[0, 1]` does.
    pub residual_eta: Option<f64>,
    /// Source squeeze parameter that reaches the target through the listed
    /// stages, or `None` if unreachable.
    pub required_source_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetReport {
    pub source_r: f64,
    pub source_db: f64,
    pub rows: Vec<BudgetRow>,
    pub output_snu: f64,
    pub output_db: f64,
    pub target: Option<TargetAnalysis>,
}

/// Propagates `e^(-2r)` through `stages` and an additive `dark_snu`.
pub fn loss_ledger(
    r: f64,
    stages: &[(String, f64)],
    dark_snu: f64,
    target_db: Option<f64>,
) -> BudgetReport {
    let source = (-2.0 * r).exp();
    let mut v = source;
    let mut rows = Vec::with_capacity(stages.len() + 1);
    for (label, eta) in stages {
        let before = v_to_db(v);
        v = eta * v + (1.0 - eta);
        rows.push(BudgetRow {
            stage: label.clone(),
            eta: *eta,
            variance_snu: v,
            level_db: v_to_db(v),
            erosion_db: v_to_db(v) - before,
        });
    }
    let optical = v;
    if dark_snu > 0.0 {
        let before = v_to_db(v);
        v += dark_snu;
        rows.push(BudgetRow {
            stage: "dark noise".to_string(),
            eta: 1.0,
            variance_snu: v,
            level_db: v_to_db(v),
            erosion_db: v_to_db(v) - before,
        });
    }

    let target = target_db.map(|target_db| {
        let vt = squeezesim_core::db_to_v(target_db);
        let eta_total: f64 = stages.iter().map(|(_, e)| e).product();
        let residual_eta = if optical < 1.0 {
            let eta = (1.0 + dark_snu - vt) / (1.0 - optical);
            // rounding slack for targets that sit exactly on the output
            (-1e-12..=1.0 + 1e-12)
                .contains(&eta)
                .then_some(eta.clamp(0.0, 1.0))
        } else {
            None
        };
        TargetAnalysis {
            target_db,
            residual_eta,
            required_source_r: required_source_r(eta_total, dark_snu, vt),
        }
    });

    BudgetReport {
        source_r: r,
        source_db: r_to_db(r),
        rows,
        output_snu: v,
        output_db: v_to_db(v),
        target,
    }
}

/// Bisection for the source `r` whose output `η·e^(-2r) + 1 − η + dark`
/// equals `target_snu`. The output decreases monotonically in `r`.
pub fn required_source_r(eta_total: f64, dark_snu: f64, target_snu: f64) -> Option<f64> {
    const R_MAX: f64 = 20.0;
    let out = |r: f64| eta_total * (-2.0 * r).exp() + (1.0 - eta_total) + dark_snu;
    let f = |r: f64| out(r) - target_snu;
    if f(0.0) < 0.0 || f(R_MAX) > 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (0.0, R_MAX);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
