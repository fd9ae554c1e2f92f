//! JSON state files and small serialization helpers.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{ExactState, GaussianInt};
use crate::states::{PureState, C64};

/// On-disk state: `{"dim", "amplitudes": [[re, im], ...]}`, plus
/// `denominator` and `gaussian_numerators` for exact states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaussian_numerators: Option<Vec<[i64; 2]>>,
}

impl StateJson {
    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            dim: psi.dim(),
            amplitudes: psi.amplitudes().iter().map(|c| [c.re, c.im]).collect(),
            denominator: None,
            gaussian_numerators: None,
        }
    }

    pub fn from_exact(psi: &ExactState) -> Result<Self> {
        let small = |b: &BigInt| {
            b.to_i64()
                .ok_or_else(|| Error::Format(format!("integer {b} does not fit in 64 bits")))
        };
        let mut out = Self::from_pure(&psi.to_pure());
        out.denominator = Some(small(psi.denominator())?);
        out.gaussian_numerators = Some(
            psi.numerators()
                .iter()
                .map(|g| Ok([small(&g.re)?, small(&g.im)?]))
                .collect::<Result<_>>()?,
        );
        Ok(out)
    }

    /// Exact part, if present and consistent.
    pub fn exact(&self) -> Result<Option<ExactState>> {
        match (&self.gaussian_numerators, self.denominator) {
            (Some(nums), Some(den)) => {
                if nums.len() != self.dim {
                    return Err(Error::DimMismatch {
                        expected: self.dim,
                        found: nums.len(),
                    });
                }
                let nums = nums.iter().map(|&[a, b]| GaussianInt::new(a, b)).collect();
                Ok(Some(ExactState::new(nums, den)?))
            }
            (None, None) => Ok(None),
            _ => Err(Error::Format(
                "denominator and gaussian_numerators must appear together".into(),
            )),
        }
    }

    /// Float state. The exact part wins when present; otherwise the
    /// amplitudes are normalized.
    pub fn pure(&self) -> Result<PureState> {
        if let Some(e) = self.exact()? {
            return Ok(e.to_pure());
        }
        if self.amplitudes.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: self.amplitudes.len(),
            });
        }
        PureState::normalize(
            self.amplitudes
                .iter()
                .map(|&[re, im]| C64::new(re, im))
                .collect(),
        )
    }
}

pub fn serialize_state<S: Serializer>(
    psi: &PureState,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    StateJson::from_pure(psi).serialize(s)
}

pub fn read_state_file(path: &Path) -> Result<StateJson> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

/// `x` with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let e = ExactState::from_i64(&[(0, 1), (0, 1), (0, 1), (1, 0)], 2).unwrap();
        let j = StateJson::from_exact(&e).unwrap();
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"gaussian_numerators\":[[0,1],[0,1],[0,1],[1,0]]"));
        let back: StateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.exact().unwrap().unwrap(), e);
    }

    #[test]
    fn float_file_is_normalized() {
        let j: StateJson = serde_json::from_str(r#"{"dim":2,"amplitudes":[[3,0],[0,4]]}"#).unwrap();
        let p = j.pure().unwrap();
        assert!((p.amplitudes()[1].im - 0.8).abs() < 1e-15);
        let bad: StateJson =
            serde_json::from_str(r#"{"dim":2,"amplitudes":[[1,0],[1,0]],"denominator":1}"#)
                .unwrap();
        assert!(bad.pure().is_err());
    }
}
