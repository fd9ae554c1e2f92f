//! Concurrence of two-qubit pure states.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rational_string, ExactState};
use crate::orbit::OrbitFamily;
use crate::states::PureState;

/// Largest allowed concurrence spread inside one orbit.
pub const ORBIT_SPREAD_TOL: f64 = 1e-10;

/// `2 |c1 c4 - c2 c3|`.
pub fn concurrence(psi: &PureState) -> Result<f64> {
    if psi.dim() != 4 {
        return Err(Error::DimMismatch {
            expected: 4,
            found: psi.dim(),
        });
    }
    let c = psi.amplitudes();
    Ok(2.0 * (c[0] * c[3] - c[1] * c[2]).norm())
}

/// Squared concurrence as an exact rational.
pub fn concurrence_sq_exact(psi: &ExactState) -> Result<BigRational> {
    if psi.dim() != 4 {
        return Err(Error::DimMismatch {
            expected: 4,
            found: psi.dim(),
        });
    }
    let n = psi.numerators();
    let det = &(&n[0] * &n[3]) - &(&n[1] * &n[2]);
    let den = psi.denominator();
    let den4 = den * den * den * den;
    Ok(BigRational::new(det.norm_sqr() * BigInt::from(4), den4))
}

/// Histogram label: the value rounded to ten decimals, trailing zeros removed.
pub fn value_label(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcurrenceProfile {
    /// One value per orbit, in input order.
    pub per_orbit: Vec<f64>,
    /// Number of orbits per rounded value.
    pub histogram: BTreeMap<String, usize>,
    /// Exact squared value per label, when the orbits carry exact states.
    pub value_squared: BTreeMap<String, String>,
}

/// Per-orbit concurrence, checking that it is constant within each orbit.
pub fn orbit_concurrence_profile(orbits: &[OrbitFamily]) -> Result<ConcurrenceProfile> {
    let mut per_orbit = Vec::with_capacity(orbits.len());
    let mut histogram = BTreeMap::new();
    let mut value_squared = BTreeMap::new();
    for (i, orbit) in orbits.iter().enumerate() {
        let values: Vec<f64> = orbit
            .states
            .iter()
            .map(concurrence)
            .collect::<Result<_>>()?;
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > ORBIT_SPREAD_TOL {
            return Err(Error::NonConstantOrbit {
                orbit: i,
                spread: hi - lo,
            });
        }
        let v = values.first().copied().unwrap_or(f64::NAN);
        let label = value_label(v);
        *histogram.entry(label.clone()).or_insert(0) += 1;
        if let Some(exact) = orbit.exact.as_ref() {
            let squares: Vec<BigRational> = exact
                .iter()
                .map(concurrence_sq_exact)
                .collect::<Result<_>>()?;
            if squares.iter().any(|q| q != &squares[0]) {
                return Err(Error::NonConstantOrbit {
                    orbit: i,
                    spread: hi - lo,
                });
            }
            value_squared.insert(label, rational_string(&squares[0]));
        }
        per_orbit.push(v);
    }
    Ok(ConcurrenceProfile {
        per_orbit,
        histogram,
        value_squared,
    })
}
