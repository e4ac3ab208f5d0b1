//! Imprecision / back-action trade-off and the standard quantum limit.
//!
//! In variance form the total added noise at photon number `N` is
//! `S(N) = a·e^(-2r)/N + b·e^(2r)·N`: phase squeezing lowers the shot-noise
//! term and the anti-squeezed amplitude quadrature raises the radiation
//! pressure term by the same factor. The minimum `2√(ab)` does not depend on
//! `r`; only the photon number where it is reached moves.

use crate::{check_non_negative, check_positive, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqlNoise {
    pub imprecision: f64,
    pub backaction: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqlOptimum {
    pub n_star: f64,
    pub s_min: f64,
}

pub fn sql_total_noise(n_photons: f64, r: f64, a: f64, b: f64) -> Result<SqlNoise> {
    check_positive("photon number N", n_photons)?;
    check_non_negative("squeeze parameter r", r)?;
    check_positive("imprecision coefficient a", a)?;
    check_positive("back-action coefficient b", b)?;
    let imprecision = a * libm::exp(-2.0 * r) / n_photons;
    let backaction = b * libm::exp(2.0 * r) * n_photons;
    Ok(SqlNoise {
        imprecision,
        backaction,
        total: imprecision + backaction,
    })
}

/// `N* = e^(-2r)·√(a/b)`, `S_min = 2√(ab)`.
pub fn sql_optimum(r: f64, a: f64, b: f64) -> Result<SqlOptimum> {
    check_non_negative("squeeze parameter r", r)?;
    check_positive("imprecision coefficient a", a)?;
    check_positive("back-action coefficient b", b)?;
    Ok(SqlOptimum {
        n_star: libm::exp(-2.0 * r) * libm::sqrt(a / b),
        s_min: 2.0 * libm::sqrt(a * b),
    })
}
