//! Pure states, phase-insensitive comparison and canonical keys.
//!
//! A [`PureState`] is a unit-norm amplitude vector. Everything downstream
//! (magic, orbits, certification) works on rays, so two states that differ
//! by a global phase are treated as the same point via [`PureState::equal_up_to_phase`]
//! and [`PureState::canonical_key`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Entries below this magnitude count as zero when normalizing.
pub const ZERO_TOL: f64 = 1e-14;
/// Allowed deviation from unit norm for an already-normalized state.
pub const NORM_TOL: f64 = 1e-12;
/// Pivot threshold and grid spacing for canonical keys.
pub const KEY_RESOLUTION: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

/// Phase-canonicalized, quantized amplitudes. Equal for states that agree up to
/// a global phase (away from rounding boundaries of the 1e-8 grid).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub Vec<(i64, i64)>);

impl PureState {
    /// Rescales `raw` to unit norm.
    pub fn normalize(raw: Vec<C64>) -> Result<Self> {
        if raw.is_empty() || raw.iter().all(|c| c.norm() < ZERO_TOL) {
            return Err(Error::ZeroVector);
        }
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Ok(Self {
            amps: raw.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// Accepts amplitudes that are already unit norm (within 1e-12) and
    /// renormalizes away the residual.
    pub fn from_unit(amps: Vec<C64>) -> Result<Self> {
        let n2: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if (n2 - 1.0).abs() > 2.0 * NORM_TOL {
            return Err(Error::Format(format!(
                "amplitudes have squared norm {n2}, expected 1"
            )));
        }
        Self::normalize(amps)
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::normalize(pairs.iter().map(|&(re, im)| C64::new(re, im)).collect())
    }

    /// Computational basis vector `|k>`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Self { amps }
    }

    /// Haar-random state from normalized complex Gaussian amplitudes.
    pub fn haar_random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let raw: Vec<C64> = (0..dim)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(s) = Self::normalize(raw) {
                return s;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<C64> {
        self.check_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Squared overlap `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// `min_phi || self - e^{i phi} other ||`.
    ///
    /// The optimal phase is `arg <other|self>`; the residual is then evaluated
    /// directly rather than through `sqrt(2 - 2|<a|b>|)`, which loses half the
    /// digits for nearly equal states.
    pub fn phase_distance(&self, other: &Self) -> Result<f64> {
        let ov = other.inner_product(self)?;
        let phase = if ov.norm() > 0.0 {
            ov / ov.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - phase * b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn equal_up_to_phase(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.phase_distance(other)? <= tol)
    }

    /// Rotates the first amplitude with `|c| > 1e-8` onto the positive real
    /// axis, then rounds every component to the 1e-8 grid.
    pub fn canonical_key(&self) -> CanonicalKey {
        let rot = self
            .amps
            .iter()
            .find(|c| c.norm() > KEY_RESOLUTION)
            .map(|c| c.conj() / c.norm())
            .unwrap_or(C64::new(1.0, 0.0));
        let q = |x: f64| {
            let v = (x / KEY_RESOLUTION).round() as i64;
            // fold -0 into 0
            if v == 0 {
                0
            } else {
                v
            }
        };
        CanonicalKey(
            self.amps
                .iter()
                .map(|c| {
                    let r = c * rot;
                    (q(r.re), q(r.im))
                })
                .collect(),
        )
    }

    /// `U |self>` renormalized against rounding drift.
    pub fn apply(&self, op: &DMatrix<C64>) -> Result<Self> {
        if op.ncols() != self.dim() || op.nrows() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: op.ncols(),
            });
        }
        let out: Vec<C64> = (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| op[(r, c)] * self.amps[c]).sum())
            .collect();
        Self::normalize(out)
    }

    /// Multiplies every amplitude by `e^{i phi}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        let p = C64::from_polar(1.0, phi);
        Self {
            amps: self.amps.iter().map(|c| c * p).collect(),
        }
    }
}
