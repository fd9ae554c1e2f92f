//! Shift, clock and displacement operators and the phase-quotiented
//! Weyl-Heisenberg group of a single qudit or a tensor product of qudits.
//!
//! Displacements are `D_{a1 a2} = w^{a1 a2 / 2} X^{a1} Z^{a2}` with
//! `w = exp(2 pi i / d)` and `w^{1/2} = exp(pi i / d)`. For `d = 2` this gives
//! `D_{11} = i X Z = Y`, so the single-qubit group is `{1, X, Z, Y}`.
//!
//! Every displacement is monomial (one nonzero per column), which is how
//! expectations are evaluated; the dense matrix is kept for algebraic checks.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exact::ExactState;
use crate::orbit::{OrbitFamily, Provenance};
use crate::states::{PureState, C64};

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDim(d));
    }
    Ok(())
}

/// `X |k> = |k + 1 mod d>`.
pub fn shift_op(d: usize) -> Result<DMatrix<C64>> {
    check_dim(d)?;
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d {
        m[((k + 1) % d, k)] = C64::new(1.0, 0.0);
    }
    Ok(m)
}

/// `Z |k> = w^k |k>`.
pub fn clock_op(d: usize) -> Result<DMatrix<C64>> {
    check_dim(d)?;
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d {
        m[(k, k)] = C64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64);
    }
    Ok(m)
}

/// A displacement operator (or tensor product of them).
#[derive(Debug, Clone)]
pub struct WhOperator {
    factor_dims: Vec<usize>,
    index: Vec<(usize, usize)>,
    matrix: DMatrix<C64>,
    /// `O |k> = phases[k] |perm[k]>`
    perm: Vec<usize>,
    phases: Vec<C64>,
    /// Powers of `i` reproducing the operator up to a global phase, when all
    /// entries are Gaussian units up to that phase (`d` in {2, 4}).
    exact_phase: Option<Vec<u8>>,
}

impl WhOperator {
    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn index_tuple(&self) -> &[(usize, usize)] {
        &self.index
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.index.iter().all(|&(a, b)| a == 0 && b == 0)
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn exact_phase(&self) -> Option<&[u8]> {
        self.exact_phase.as_deref()
    }

    /// `O |psi>`.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        self.check(psi)?;
        let a = psi.amplitudes();
        let mut out = vec![C64::new(0.0, 0.0); a.len()];
        for k in 0..a.len() {
            out[self.perm[k]] = self.phases[k] * a[k];
        }
        PureState::normalize(out)
    }

    /// `O |psi>` exactly, up to a global unit phase.
    pub fn apply_exact(&self, psi: &ExactState) -> Result<ExactState> {
        if psi.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        let phase = self
            .exact_phase
            .as_ref()
            .ok_or_else(|| Error::NotExact(format!("factor dims {:?}", self.factor_dims)))?;
        Ok(psi.apply_monomial(&self.perm, phase))
    }

    fn check(&self, psi: &PureState) -> Result<()> {
        if psi.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(())
    }

    fn tensor(&self, other: &Self) -> Self {
        let n2 = other.dim();
        let n = self.dim() * n2;
        let mut perm = vec![0; n];
        let mut phases = vec![C64::new(0.0, 0.0); n];
        let mut exact = match (&self.exact_phase, &other.exact_phase) {
            (Some(_), Some(_)) => Some(vec![0u8; n]),
            _ => None,
        };
        for k1 in 0..self.dim() {
            for k2 in 0..n2 {
                let k = k1 * n2 + k2;
                perm[k] = self.perm[k1] * n2 + other.perm[k2];
                phases[k] = self.phases[k1] * other.phases[k2];
                if let (Some(e), Some(p1), Some(p2)) =
                    (exact.as_mut(), &self.exact_phase, &other.exact_phase)
                {
                    e[k] = (p1[k1] + p2[k2]) % 4;
                }
            }
        }
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.extend_from_slice(&other.factor_dims);
        let mut index = self.index.clone();
        index.extend_from_slice(&other.index);
        Self {
            factor_dims,
            index,
            matrix: self.matrix.kronecker(&other.matrix),
            perm,
            phases,
            exact_phase: exact,
        }
    }
}

/// `D_{a1 a2}` on a single `d`-dimensional qudit.
pub fn displacement(d: usize, a1: usize, a2: usize) -> Result<WhOperator> {
    check_dim(d)?;
    if a1 >= d || a2 >= d {
        return Err(Error::IndexOutOfRange { d, a1, a2 });
    }
    let df = d as f64;
    // w^{a1 a2 / 2} with w^{1/2} = exp(i pi / d)
    let prefactor = C64::from_polar(1.0, PI * (a1 * a2) as f64 / df);
    let mut perm = vec![0; d];
    let mut phases = vec![C64::new(0.0, 0.0); d];
    for k in 0..d {
        perm[k] = (k + a1) % d;
        phases[k] = prefactor * C64::from_polar(1.0, 2.0 * PI * ((a2 * k) % d) as f64 / df);
    }
    let mut matrix = DMatrix::zeros(d, d);
    for k in 0..d {
        matrix[(perm[k], k)] = phases[k];
    }
    // w = i^{4/d} when d divides 4; the prefactor is a power of i only when
    // 2 a1 a2 / d is an integer, otherwise it is dropped (global phase).
    let exact_phase = (4 % d == 0).then(|| {
        let step = 4 / d;
        let pre = if (2 * a1 * a2).is_multiple_of(d) {
            (2 * a1 * a2 / d) % 4
        } else {
            0
        };
        (0..d).map(|k| ((pre + step * a2 * k) % 4) as u8).collect()
    });
    Ok(WhOperator {
        factor_dims: vec![d],
        index: vec![(a1, a2)],
        matrix,
        perm,
        phases,
        exact_phase,
    })
}

/// `<psi| O |psi>`.
pub fn expectation(op: &WhOperator, psi: &PureState) -> Result<C64> {
    op.check(psi)?;
    let a = psi.amplitudes();
    Ok((0..a.len())
        .map(|k| a[op.perm[k]].conj() * op.phases[k] * a[k])
        .sum())
}

/// `|<psi| O |psi>|^2` without constructing the complex result twice.
pub(crate) fn expectation_sq_unchecked(op: &WhOperator, amps: &[C64]) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..amps.len() {
        acc += amps[op.perm[k]].conj() * op.phases[k] * amps[k];
    }
    acc.norm_sqr()
}

/// Phase-quotient Weyl-Heisenberg group: one representative per index tuple.
#[derive(Debug, Clone)]
pub struct WhGroup {
    factor_dims: Vec<usize>,
    operators: Vec<WhOperator>,
}

impl WhGroup {
    /// Operators are ordered lexicographically in their index tuples, with
    /// the leftmost tensor factor most significant.
    pub fn new(factor_dims: &[usize]) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidDim(0));
        }
        let mut operators: Vec<WhOperator> = Vec::new();
        for (f, &d) in factor_dims.iter().enumerate() {
            check_dim(d)?;
            let single: Vec<WhOperator> = (0..d)
                .flat_map(|a1| (0..d).map(move |a2| (a1, a2)))
                .map(|(a1, a2)| displacement(d, a1, a2))
                .collect::<Result<_>>()?;
            operators = if f == 0 {
                single
            } else {
                operators
                    .iter()
                    .flat_map(|o| single.iter().map(move |s| o.tensor(s)))
                    .collect()
            };
        }
        Ok(Self {
            factor_dims: factor_dims.to_vec(),
            operators,
        })
    }

    /// `W(2)^{(x) n}`.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(&vec![2; n])
    }

    /// `W(d)` for a single qudit.
    pub fn qudit(d: usize) -> Result<Self> {
        Self::new(&[d])
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    pub fn operators(&self) -> &[WhOperator] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.factor_dims.iter().map(|d| format!("W({d})")).collect();
        parts.join("x")
    }

    pub fn supports_exact(&self) -> bool {
        self.operators.iter().all(|o| o.exact_phase.is_some())
    }

    fn check(&self, psi_dim: usize) -> Result<()> {
        if psi_dim != self.total_dim() {
            return Err(Error::DimMismatch {
                expected: self.total_dim(),
                found: psi_dim,
            });
        }
        Ok(())
    }
}

/// All distinct images `O |psi>`, deduplicated up to phase, in group order.
pub fn wh_orbit(psi: &PureState, group: &WhGroup) -> Result<OrbitFamily> {
    group.check(psi.dim())?;
    let mut seen = HashMap::new();
    let mut states = Vec::new();
    let mut provenance = Vec::new();
    for op in group.operators() {
        let image = op.apply(psi)?;
        let key = image.canonical_key();
        if seen.insert(key, states.len()).is_none() {
            states.push(image);
            provenance.push(Provenance::Displacement(op.index_tuple().to_vec()));
        }
    }
    Ok(OrbitFamily {
        seed: psi.clone(),
        states,
        exact: None,
        provenance,
        generators: vec![group.label()],
    })
}

/// [`wh_orbit`] in Gaussian-rational arithmetic (factor dims in {2, 4}).
pub fn wh_orbit_exact(psi: &ExactState, group: &WhGroup) -> Result<OrbitFamily> {
    group.check(psi.dim())?;
    let mut seen = HashMap::new();
    let mut exact = Vec::new();
    let mut provenance = Vec::new();
    for op in group.operators() {
        let image = op.apply_exact(psi)?;
        if seen.insert(image.ray_key(), exact.len()).is_none() {
            exact.push(image);
            provenance.push(Provenance::Displacement(op.index_tuple().to_vec()));
        }
    }
    Ok(OrbitFamily {
        seed: psi.to_pure(),
        states: exact.iter().map(ExactState::to_pure).collect(),
        exact: Some(exact),
        provenance,
        generators: vec![group.label()],
    })
}
