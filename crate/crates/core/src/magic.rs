//! Stabilizer Renyi entropy.
//!
//! `Xi_alpha(psi) = (1/D) sum_O |<psi|O|psi>|^{2 alpha}` over the
//! phase-quotient WH group and `M_alpha = ln(Xi_alpha) / (1 - alpha)`.
//! Besides direct summation this module carries the closed forms of `Xi_2`
//! in the one-qubit Bloch and two-qubit hyperspherical parameterizations,
//! derivative certificates for the latter, and the SIC and WH-MUB bounds.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactState;
use crate::numdiff;
use crate::states::{PureState, C64};
use crate::wh_group::{expectation_sq_unchecked, WhGroup};

/// Gradient norm below which a point counts as stationary for the Hessian test.
pub const STATIONARY_TOL: f64 = 1e-7;
/// Smallest Hessian eigenvalue accepted as strictly positive.
pub const POSITIVITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SreValue {
    pub alpha: f64,
    pub xi: f64,
    pub m: f64,
}

/// Neumaier-compensated sum.
fn compensated_sum(it: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in it {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(())
}

fn check_dim(psi_dim: usize, group: &WhGroup) -> Result<()> {
    if psi_dim != group.total_dim() {
        return Err(Error::DimMismatch {
            expected: group.total_dim(),
            found: psi_dim,
        });
    }
    Ok(())
}

pub fn xi(alpha: f64, psi: &PureState, group: &WhGroup) -> Result<f64> {
    check_alpha(alpha)?;
    check_dim(psi.dim(), group)?;
    Ok(xi_unchecked(alpha, psi.amplitudes(), group))
}

pub(crate) fn xi_unchecked(alpha: f64, amps: &[C64], group: &WhGroup) -> f64 {
    let d = group.total_dim() as f64;
    let sum = if alpha == 2.0 {
        compensated_sum(group.operators().iter().map(|o| {
            let e = expectation_sq_unchecked(o, amps);
            e * e
        }))
    } else {
        compensated_sum(
            group
                .operators()
                .iter()
                .map(|o| expectation_sq_unchecked(o, amps).powf(alpha)),
        )
    };
    sum / d
}

/// `Xi_2` of an unnormalized amplitude vector, after normalizing it.
pub(crate) fn xi2_raw(amps: &[C64], group: &WhGroup) -> f64 {
    let n2: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    xi_unchecked(2.0, amps, group) / (n2 * n2)
}

pub fn sre(alpha: f64, psi: &PureState, group: &WhGroup) -> Result<SreValue> {
    if alpha == 1.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    let x = xi(alpha, psi, group)?;
    let m = if alpha == 2.0 {
        -x.ln()
    } else {
        x.ln() / (1.0 - alpha)
    };
    Ok(SreValue { alpha, xi: x, m })
}

/// `Xi_2` in exact rational arithmetic.
pub fn xi2_exact(psi: &ExactState, group: &WhGroup) -> Result<BigRational> {
    check_dim(psi.dim(), group)?;
    let mut acc = BigRational::zero();
    for op in group.operators() {
        let phase = op
            .exact_phase()
            .ok_or_else(|| Error::NotExact(group.label()))?;
        let e = psi.monomial_expectation_sq(op.permutation(), phase);
        acc += &e * &e;
    }
    Ok(acc / BigRational::from_integer((group.total_dim() as i64).into()))
}

/// Closed form of `Xi_2` for `(cos(theta/2), sin(theta/2) e^{i phi})`.
pub fn xi2_closed_1q(theta: f64, phi: f64) -> f64 {
    (8.0 * theta.sin().powi(4) * (4.0 * phi).cos()
        + 4.0 * (2.0 * theta).cos()
        + 7.0 * (4.0 * theta).cos()
        + 53.0)
        / 64.0
}

/// Closed form of `Xi_2` for the two-qubit state with amplitudes
/// `c1 = s1 s2 e^{i phi1}, c2 = s1 c2 e^{i phi2}, c3 = c1 s3 e^{i phi3}, c4 = c1 c3`
/// (`s_k = sin theta_k`, `c_k = cos theta_k`).
///
/// Parameters are `[theta1, theta2, theta3, phi1, phi2, phi3]`.
pub fn xi2_closed_2q(p: &[f64; 6]) -> f64 {
    let [t1, t2, t3, p1, p2, p3] = *p;
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let (s3, c3) = t3.sin_cos();
    let sq = |x: f64| x * x;
    let p4 = |x: f64| x.powi(4);
    let p8 = |x: f64| x.powi(8);

    let fully_mixed = 3.0 / 32.0
        * p4((2.0 * t1).sin())
        * sq((2.0 * t2).sin())
        * sq((2.0 * t3).sin())
        * (2.0 * sq(p3.sin()) * sq((p2 - p1).sin())
            + 2.0 * sq(p2.sin()) * sq((p3 - p1).sin())
            + 2.0 * sq(p1.sin()) * sq((p2 - p3).sin())
            + 1.0);
    let cross = 2.0
        * p4(s1)
        * p4(c1)
        * (24.0
            * sq(s2)
            * sq(c2)
            * sq(s3)
            * sq(c3)
            * (sq(p3.cos()) * sq((p2 - p1).cos())
                + sq(p2.cos()) * sq((p3 - p1).cos())
                + sq(p1.cos()) * sq((p2 - p3).cos()))
            + p4(c2)
                * (p4(s3) * ((4.0 * p2 - 4.0 * p3).cos() + 6.0)
                    + p4(c3) * ((4.0 * p2).cos() + 6.0))
            + p4(s2)
                * (p4(s3) * ((4.0 * p3 - 4.0 * p1).cos() + 6.0)
                    + p4(c3) * ((4.0 * p1).cos() + 6.0)));
    let upper = 2.0 * p8(s1) * p4(s2) * p4(c2) * ((4.0 * p2 - 4.0 * p1).cos() + 6.0)
        + p8(s1) * p8(s2)
        + p8(s1) * p8(c2);
    let lower = p8(c1) * (2.0 * p4(s3) * p4(c3) * ((4.0 * p3).cos() + 6.0) + p8(s3) + p8(c3));
    fully_mixed + cross + upper + lower
}

fn closed_2q_slice(x: &[f64]) -> f64 {
    xi2_closed_2q(&[x[0], x[1], x[2], x[3], x[4], x[5]])
}

/// Central-difference gradient of [`xi2_closed_2q`] with step 1e-5.
pub fn gradient_xi2(p: &[f64; 6]) -> [f64; 6] {
    let g = numdiff::central_gradient(closed_2q_slice, p, numdiff::GRADIENT_STEP);
    [g[0], g[1], g[2], g[3], g[4], g[5]]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessianCertificate {
    pub gradient_norm: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub positive_definite: bool,
}

impl HessianCertificate {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }
}

/// Hessian test for any smooth function at a stationary point.
pub fn hessian_certificate<F: Fn(&[f64]) -> f64 + Copy>(
    f: F,
    x: &[f64],
) -> Result<HessianCertificate> {
    let g = numdiff::central_gradient(f, x, numdiff::GRADIENT_STEP);
    let gradient_norm = numdiff::norm(&g);
    if gradient_norm.is_nan() || gradient_norm >= STATIONARY_TOL {
        return Err(Error::NotAStationaryPoint { gradient_norm });
    }
    let eigenvalues = numdiff::sorted_eigenvalues(&numdiff::hessian(f, x, numdiff::HESSIAN_STEP));
    let positive_definite = eigenvalues.iter().all(|&e| e > POSITIVITY_TOL);
    Ok(HessianCertificate {
        gradient_norm,
        eigenvalues,
        positive_definite,
    })
}

/// Hessian test of [`xi2_closed_2q`].
pub fn hessian_positive_definite(p: &[f64; 6]) -> Result<HessianCertificate> {
    hessian_certificate(closed_2q_slice, p)
}

fn check_bound_args(alpha: f64, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDim(d));
    }
    if alpha == 1.0 || alpha.is_nan() || alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(())
}

/// Upper bound on `M_alpha` saturated by WH-covariant SIC fiducials.
pub fn sic_bound(alpha: f64, d: usize) -> Result<f64> {
    check_bound_args(alpha, d)?;
    let d = d as f64;
    Ok(((1.0 + (d - 1.0) * (d + 1.0).powf(1.0 - alpha)) / d).ln() / (1.0 - alpha))
}

/// `M_alpha` of a WH-MUB fiducial state.
pub fn mub_bound(alpha: f64, d: usize) -> Result<f64> {
    check_bound_args(alpha, d)?;
    let d = d as f64;
    Ok(((1.0 + (d - 1.0) * d.powf(1.0 - alpha)) / d).ln() / (1.0 - alpha))
}
