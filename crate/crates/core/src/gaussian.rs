//! Gaussian states in shot-noise units and the symplectic maps acting on them.
//!
//! A state of `n` modes is a mean vector of length `2n` and a `2n × 2n`
//! covariance matrix, both ordered `x₁, p₁, x₂, p₂, …`. The vacuum has zero mean
//! and identity covariance. Every operation returns a new state and
//! re-symmetrizes the covariance, so round-off never accumulates into an
//! asymmetric matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::{check_finite, check_non_negative, check_unit, Error, Result, PHYSICALITY_TOL};

/// Largest entrywise asymmetry accepted by [`GaussianState::from_parts`].
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: Vec<f64>,
    cov: Vec<f64>,
}

/// Coefficients of a linear combination of quadratures, `q·(x₁, p₁, …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureForm(Vec<f64>);

impl QuadratureForm {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        for &c in &coeffs {
            check_finite("quadrature coefficient", c)?;
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return Err(Error::ZeroQuadrature);
        }
        Ok(Self(coeffs))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }
}

impl GaussianState {
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        let dim = 2 * n_modes;
        Ok(Self {
            n_modes,
            mean: vec![0.0; dim],
            cov: linalg::identity(dim),
        })
    }

    /// Builds a state from a mean vector and a row-major covariance matrix.
    ///
    /// The covariance must be symmetric to within `1e-12` and physical (every
    /// symplectic eigenvalue at least `1 - 1e-9`).
    pub fn from_parts(mean: Vec<f64>, cov: Vec<f64>) -> Result<Self> {
        if mean.is_empty() {
            return Err(Error::ZeroModes);
        }
        if !mean.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: mean.len() + 1,
                got: mean.len(),
            });
        }
        let dim = mean.len();
        if cov.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: cov.len(),
            });
        }
        for &v in mean.iter().chain(cov.iter()) {
            check_finite("state entry", v)?;
        }
        let mut asym: f64 = 0.0;
        for i in 0..dim {
            for j in i + 1..dim {
                asym = asym.max((cov[i * dim + j] - cov[j * dim + i]).abs());
            }
        }
        if asym > SYMMETRY_TOL {
            return Err(Error::Asymmetric(asym));
        }
        let mut state = Self {
            n_modes: dim / 2,
            mean,
            cov,
        };
        state.symmetrize();
        state.check_physical()?;
        Ok(state)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Phase-space dimension, `2 · n_modes`.
    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Row-major covariance matrix.
    pub fn covariance(&self) -> &[f64] {
        &self.cov
    }

    pub fn cov_entry(&self, i: usize, j: usize) -> f64 {
        self.cov[i * self.dim() + j]
    }

    /// The 2×2 covariance block of one mode, row-major.
    pub fn mode_block(&self, mode: usize) -> Result<[f64; 4]> {
        self.check_mode(mode)?;
        let (x, p) = (2 * mode, 2 * mode + 1);
        Ok([
            self.cov_entry(x, x),
            self.cov_entry(x, p),
            self.cov_entry(p, x),
            self.cov_entry(p, p),
        ])
    }

    pub fn squeeze(&self, mode: usize, r: f64, phase: f64) -> Result<Self> {
        check_non_negative("squeeze parameter r", r)?;
        check_finite("squeeze phase", phase)?;
        self.check_mode(mode)?;
        // cosh r·I + sinh r·[[cos φ, sin φ], [sin φ, -cos φ]]; φ = 0 squeezes p.
        let (ch, sh) = (libm::cosh(r), libm::sinh(r));
        let (c, s) = (libm::cos(phase), libm::sin(phase));
        let m = [ch + sh * c, sh * s, sh * s, ch - sh * c];
        Ok(self.apply_local(&[mode], &m))
    }

    /// Two-mode squeezing with cross-covariance `sinh(2r)·diag(1, -1)` on vacuum.
    pub fn two_mode_squeeze(&self, i: usize, j: usize, r: f64) -> Result<Self> {
        check_non_negative("squeeze parameter r", r)?;
        self.check_pair(i, j)?;
        let (ch, sh) = (libm::cosh(r), libm::sinh(r));
        #[rustfmt::skip]
        let m = [
            ch,  0.0, sh,  0.0,
            0.0, ch,  0.0, -sh,
            sh,  0.0, ch,  0.0,
            0.0, -sh, 0.0, ch,
        ];
        Ok(self.apply_local(&[i, j], &m))
    }

    pub fn displace(&self, mode: usize, dx: f64, dp: f64) -> Result<Self> {
        self.check_mode(mode)?;
        check_finite("displacement dx", dx)?;
        check_finite("displacement dp", dp)?;
        let mut out = self.clone();
        out.mean[2 * mode] += dx;
        out.mean[2 * mode + 1] += dp;
        Ok(out)
    }

    /// Rotates one mode's phase space by `theta` (counter-clockwise), i.e.
    /// `a → e^{iθ} a`.
    pub fn phase_rotate(&self, mode: usize, theta: f64) -> Result<Self> {
        self.check_mode(mode)?;
        check_finite("rotation angle", theta)?;
        let (c, s) = (libm::cos(theta), libm::sin(theta));
        Ok(self.apply_local(&[mode], &[c, -s, s, c]))
    }

    /// Beamsplitter mixing modes `i` and `j`; `transmissivity` is the power
    /// transmission `T`, so mode `i` keeps `√T` of its own amplitude.
    pub fn beamsplitter(&self, i: usize, j: usize, transmissivity: f64) -> Result<Self> {
        check_unit("transmissivity", transmissivity)?;
        self.check_pair(i, j)?;
        let t = libm::sqrt(transmissivity);
        let r = libm::sqrt(1.0 - transmissivity);
        #[rustfmt::skip]
        let m = [
            t,   0.0, r,   0.0,
            0.0, t,   0.0, r,
            -r,  0.0, t,   0.0,
            0.0, -r,  0.0, t,
        ];
        Ok(self.apply_local(&[i, j], &m))
    }

    /// Pure-loss channel of efficiency `eta` on one mode: the mode's block goes
    /// to `η·V + (1-η)·I`, its correlations and mean scale by `√η`.
    pub fn loss(&self, mode: usize, eta: f64) -> Result<Self> {
        check_unit("efficiency eta", eta)?;
        self.check_mode(mode)?;
        let dim = self.dim();
        let sq = libm::sqrt(eta);
        let mut out = self.clone();
        let idx = [2 * mode, 2 * mode + 1];
        for &a in &idx {
            out.mean[a] *= sq;
            for k in 0..dim {
                if idx.contains(&k) {
                    continue;
                }
                out.cov[a * dim + k] *= sq;
                out.cov[k * dim + a] *= sq;
            }
        }
        for &a in &idx {
            for &b in &idx {
                let delta = if a == b { 1.0 } else { 0.0 };
                out.cov[a * dim + b] = eta * self.cov[a * dim + b] + (1.0 - eta) * delta;
            }
        }
        out.symmetrize();
        Ok(out)
    }

    /// Tensor product `self ⊗ other`; `other`'s modes are appended.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (da, db) = (self.dim(), other.dim());
        let dim = da + db;
        let mut cov = vec![0.0; dim * dim];
        for i in 0..da {
            cov[i * dim..i * dim + da].copy_from_slice(&self.cov[i * da..(i + 1) * da]);
        }
        for i in 0..db {
            let row = (da + i) * dim + da;
            cov[row..row + db].copy_from_slice(&other.cov[i * db..(i + 1) * db]);
        }
        let mut mean = self.mean.clone();
        mean.extend_from_slice(&other.mean);
        GaussianState {
            n_modes: self.n_modes + other.n_modes,
            mean,
            cov,
        }
    }

    /// Marginal state of the listed modes, in the order given.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::ZeroModes);
        }
        for &m in modes {
            self.check_mode(m)?;
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let dim = self.dim();
        let k = idx.len();
        let mut cov = vec![0.0; k * k];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                cov[a * k + b] = self.cov[i * dim + j];
            }
        }
        Ok(Self {
            n_modes: modes.len(),
            mean: idx.iter().map(|&i| self.mean[i]).collect(),
            cov,
        })
    }

    /// `qᵀ·V·q`; for a unit-norm `q` the vacuum gives exactly 1.
    pub fn quadrature_variance(&self, q: &QuadratureForm) -> Result<f64> {
        let dim = self.dim();
        if q.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: q.len(),
            });
        }
        let c = q.coeffs();
        let mut acc = 0.0;
        for i in 0..dim {
            if c[i] == 0.0 {
                continue;
            }
            let row = &self.cov[i * dim..(i + 1) * dim];
            acc += c[i] * row.iter().zip(c).map(|(v, cj)| v * cj).sum::<f64>();
        }
        Ok(acc)
    }

    /// Expectation value `q·mean`.
    pub fn quadrature_mean(&self, q: &QuadratureForm) -> Result<f64> {
        if q.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: q.len(),
            });
        }
        Ok(q.coeffs().iter().zip(&self.mean).map(|(c, m)| c * m).sum())
    }

    /// Symplectic eigenvalues in ascending order, one per mode.
    ///
    /// Computed as the square roots of the (doubly degenerate) eigenvalues of
    /// `-(V^½ Ω V^½)²`, which is symmetric positive semi-definite.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let dim = self.dim();
        let root = linalg::symmetric_sqrt(&self.cov, dim);
        let omega = symplectic_form(self.n_modes);
        let a = linalg::matmul(&linalg::matmul(&root, &omega, dim), &root, dim);
        // -A² = AᵀA for antisymmetric A
        let mut ata = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v: f64 = (0..dim).map(|k| a[k * dim + i] * a[k * dim + j]).sum();
                ata[i * dim + j] = v;
                ata[j * dim + i] = v;
            }
        }
        let (mut values, _) = linalg::symmetric_eigen(&ata, dim);
        values.sort_by(f64::total_cmp);
        values
            .chunks(2)
            .map(|pair| libm::sqrt((0.5 * (pair[0] + pair[1])).max(0.0)))
            .collect()
    }

    /// `1 / √det V`.
    pub fn purity(&self) -> f64 {
        let (values, _) = linalg::symmetric_eigen(&self.cov, self.dim());
        let det: f64 = values.iter().product();
        1.0 / libm::sqrt(det)
    }

    /// Errors with [`Error::Unphysical`] if any symplectic eigenvalue falls below
    /// `1 - PHYSICALITY_TOL`.
    pub fn check_physical(&self) -> Result<()> {
        let min = self
            .symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < 1.0 - PHYSICALITY_TOL || !min.is_finite() {
            Err(Error::Unphysical(min))
        } else {
            Ok(())
        }
    }

    /// Applies a symplectic matrix `m` (row-major, `2k × 2k`) acting on the
    /// listed modes and the identity elsewhere: `V → S V Sᵀ`, `μ → S μ`.
    pub(crate) fn apply_local(&self, modes: &[usize], m: &[f64]) -> Self {
        let idx: Vec<usize> = modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let k = idx.len();
        debug_assert_eq!(m.len(), k * k);
        let dim = self.dim();
        let mut out = self.clone();

        // rows: S·V
        for col in 0..dim {
            for (a, &i) in idx.iter().enumerate() {
                out.cov[i * dim + col] = idx
                    .iter()
                    .enumerate()
                    .map(|(b, &j)| m[a * k + b] * self.cov[j * dim + col])
                    .sum();
            }
        }
        // columns: (S·V)·Sᵀ
        let rows = out.cov.clone();
        for row in 0..dim {
            for (a, &i) in idx.iter().enumerate() {
                out.cov[row * dim + i] = idx
                    .iter()
                    .enumerate()
                    .map(|(b, &j)| rows[row * dim + j] * m[a * k + b])
                    .sum();
            }
        }
        for (a, &i) in idx.iter().enumerate() {
            out.mean[i] = idx
                .iter()
                .enumerate()
                .map(|(b, &j)| m[a * k + b] * self.mean[j])
                .sum();
        }
        out.symmetrize();
        out
    }

    fn symmetrize(&mut self) {
        let dim = self.dim();
        for i in 0..dim {
            for j in i + 1..dim {
                let avg = 0.5 * (self.cov[i * dim + j] + self.cov[j * dim + i]);
                self.cov[i * dim + j] = avg;
                self.cov[j * dim + i] = avg;
            }
        }
    }

    fn check_mode(&self, index: usize) -> Result<()> {
        if index < self.n_modes {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                index,
                n_modes: self.n_modes,
            })
        }
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        if i == j {
            return Err(Error::SameMode(i));
        }
        Ok(())
    }
}

/// Block-diagonal `Ω = ⊕ [[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> Vec<f64> {
    let dim = 2 * n_modes;
    let mut omega = vec![0.0; dim * dim];
    for k in 0..n_modes {
        omega[(2 * k) * dim + 2 * k + 1] = 1.0;
        omega[(2 * k + 1) * dim + 2 * k] = -1.0;
    }
    omega
}
