//! One- and two-qubit Clifford(+T) gates, circuit application and
//! breadth-first Clifford orbits of states.
//!
//! Qubit 0 is the leftmost tensor factor, so for two qubits the basis order is
//! `|00>, |01>, |10>, |11>` with qubit 0 as the high bit.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, ExactState};
use crate::orbit::{OrbitFamily, Provenance};
use crate::states::{PureState, C64};
use crate::wh_group::WhGroup;

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct Gate {
    name: String,
    matrix: DMatrix<C64>,
    /// Gaussian-rational matrix equal to `matrix` up to a global phase.
    exact: Option<ExactMatrix>,
    qubits: Vec<usize>,
    clifford: bool,
}

impl Gate {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn exact(&self) -> Option<&ExactMatrix> {
        self.exact.as_ref()
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn is_clifford_gate(&self) -> bool {
        self.clifford
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Arbitrary unitary gate (not flagged Clifford, no exact form).
    pub fn custom(name: impl Into<String>, matrix: DMatrix<C64>, qubits: Vec<usize>) -> Self {
        Self {
            name: name.into(),
            matrix,
            exact: None,
            qubits,
            clifford: false,
        }
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_qubit(n: usize, q: usize) -> Result<()> {
    if !(1..=2).contains(&n) {
        return Err(Error::UnsupportedArity(n));
    }
    if q >= n {
        return Err(Error::Format(format!(
            "qubit {q} out of range for {n} qubits"
        )));
    }
    Ok(())
}

/// Lifts a one-qubit gate onto qubit `q` of an `n`-qubit register.
fn embed(
    n: usize,
    q: usize,
    m: &DMatrix<C64>,
    ex: Option<&ExactMatrix>,
) -> (DMatrix<C64>, Option<ExactMatrix>) {
    let id = DMatrix::<C64>::identity(2, 2);
    let exid = ExactMatrix::identity(2);
    let mut full = DMatrix::<C64>::identity(1, 1);
    let mut exfull = ex.map(|_| ExactMatrix::identity(1));
    for k in 0..n {
        let (f, ef) = if k == q { (m, ex) } else { (&id, Some(&exid)) };
        full = full.kronecker(f);
        exfull = match (exfull, ef) {
            (Some(acc), Some(e)) => Some(acc.kron(e)),
            _ => None,
        };
    }
    (full, exfull)
}

fn single(
    n: usize,
    q: usize,
    label: &str,
    m: DMatrix<C64>,
    ex: Option<ExactMatrix>,
    clifford: bool,
) -> Result<Gate> {
    check_qubit(n, q)?;
    let (matrix, exact) = embed(n, q, &m, ex.as_ref());
    Ok(Gate {
        name: if n == 1 {
            label.to_string()
        } else {
            format!("{label}{q}")
        },
        matrix,
        exact,
        qubits: vec![q],
        clifford,
    })
}

/// Hadamard on qubit `q`. The exact form is `e^{i pi/4} H = (1+i)/2 [[1,1],[1,-1]]`.
pub fn hadamard(n: usize, q: usize) -> Result<Gate> {
    let s = FRAC_1_SQRT_2;
    let m = DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
    let ex = ExactMatrix::from_i64(2, &[(1, 1), (1, 1), (1, 1), (-1, -1)], 2);
    single(n, q, "H", m, Some(ex), true)
}

/// Phase gate `diag(1, i)`.
pub fn phase_s(n: usize, q: usize) -> Result<Gate> {
    let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
    let ex = ExactMatrix::from_i64(2, &[(1, 0), (0, 0), (0, 0), (0, 1)], 1);
    single(n, q, "S", m, Some(ex), true)
}

/// `T = diag(1, e^{i pi/4})`; not Clifford and not Gaussian-rational.
pub fn phase_t(n: usize, q: usize) -> Result<Gate> {
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        ],
    );
    single(n, q, "T", m, None, false)
}

/// Two-qubit CNOT with the given control and target.
pub fn cnot(control: usize, target: usize) -> Result<Gate> {
    if control > 1 || target > 1 || control == target {
        return Err(Error::Format(format!(
            "invalid CNOT control {control} target {target}"
        )));
    }
    let mut perm = [0usize, 1, 2, 3];
    // basis index = 2 * b0 + b1
    for (k, p) in perm.iter_mut().enumerate() {
        let bits = [(k >> 1) & 1, k & 1];
        if bits[control] == 1 {
            let mut b = bits;
            b[target] ^= 1;
            *p = 2 * b[0] + b[1];
        }
    }
    let mut m = DMatrix::zeros(4, 4);
    let mut e = vec![(0i64, 0i64); 16];
    for (k, &p) in perm.iter().enumerate() {
        m[(p, k)] = c(1.0, 0.0);
        e[p * 4 + k] = (1, 0);
    }
    Ok(Gate {
        name: format!("CNOT{control}{target}"),
        matrix: m,
        exact: Some(ExactMatrix::from_i64(4, &e, 1)),
        qubits: vec![control, target],
        clifford: true,
    })
}

/// `{H_i, S_i, T_i}` per qubit plus both CNOTs for two qubits.
pub fn standard_gates(n: usize) -> Result<Vec<Gate>> {
    match n {
        1 => Ok(vec![hadamard(1, 0)?, phase_s(1, 0)?, phase_t(1, 0)?]),
        2 => Ok(vec![
            hadamard(2, 0)?,
            hadamard(2, 1)?,
            phase_s(2, 0)?,
            phase_s(2, 1)?,
            phase_t(2, 0)?,
            phase_t(2, 1)?,
            cnot(0, 1)?,
            cnot(1, 0)?,
        ]),
        _ => Err(Error::UnsupportedArity(n)),
    }
}

/// The Clifford subset of [`standard_gates`].
pub fn clifford_generators(n: usize) -> Result<Vec<Gate>> {
    Ok(standard_gates(n)?
        .into_iter()
        .filter(|g| g.clifford)
        .collect())
}

/// Applies `gates` in sequence order (the first gate acts first).
pub fn apply_circuit(psi: &PureState, gates: &[Gate]) -> Result<PureState> {
    let mut s = psi.clone();
    for g in gates {
        if g.dim() != s.dim() {
            return Err(Error::DimMismatch {
                expected: s.dim(),
                found: g.dim(),
            });
        }
        s = s.apply(&g.matrix)?;
    }
    Ok(s)
}

/// One instruction of a circuit file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitOp {
    pub gate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
}

/// Resolves circuit-file instructions to gates on `n` qubits.
pub fn gates_from_ops(n: usize, ops: &[CircuitOp]) -> Result<Vec<Gate>> {
    ops.iter()
        .map(|op| {
            let q = || {
                op.qubit
                    .ok_or_else(|| Error::Format(format!("gate {} needs \"qubit\"", op.gate)))
            };
            match op.gate.to_ascii_uppercase().as_str() {
                "H" => hadamard(n, q()?),
                "S" => phase_s(n, q()?),
                "T" => phase_t(n, q()?),
                "CNOT" | "CX" => {
                    if n != 2 {
                        return Err(Error::UnsupportedArity(n));
                    }
                    match (op.control, op.target) {
                        (Some(c), Some(t)) => cnot(c, t),
                        _ => Err(Error::Format(
                            "CNOT needs \"control\" and \"target\"".into(),
                        )),
                    }
                }
                other => Err(Error::Format(format!("unknown gate {other}"))),
            }
        })
        .collect()
}

fn qubit_count(dim: usize) -> Result<usize> {
    match dim {
        2 => Ok(1),
        4 => Ok(2),
        d => Err(Error::DimMismatch {
            expected: 4,
            found: d,
        }),
    }
}

/// Breadth-first closure of `seed` under `generators`, deduplicated up to
/// global phase. Members are in discovery order.
///
/// Runs in exact arithmetic when `seed_exact` is given and every generator
/// has an exact form; otherwise in floating point with canonical keys.
pub fn clifford_orbit(seed: &PureState, generators: &[Gate], cap: usize) -> Result<OrbitFamily> {
    qubit_count(seed.dim())?;
    check_generators(seed.dim(), generators)?;
    let mut seen = HashSet::new();
    let mut states = vec![seed.clone()];
    let mut provenance = vec![Provenance::Seed];
    seen.insert(seed.canonical_key());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let next = states[i].apply(&g.matrix)?;
            if seen.insert(next.canonical_key()) {
                if states.len() >= cap {
                    return Err(Error::OrbitOverflow { cap });
                }
                queue.push_back(states.len());
                states.push(next);
                provenance.push(Provenance::Gate {
                    parent: i,
                    gate: g.name.clone(),
                });
            }
        }
    }
    Ok(OrbitFamily {
        seed: seed.clone(),
        states,
        exact: None,
        provenance,
        generators: generators.iter().map(|g| g.name.clone()).collect(),
    })
}

/// [`clifford_orbit`] in Gaussian-rational arithmetic.
pub fn clifford_orbit_exact(
    seed: &ExactState,
    generators: &[Gate],
    cap: usize,
) -> Result<OrbitFamily> {
    qubit_count(seed.dim())?;
    check_generators(seed.dim(), generators)?;
    let mats: Vec<&ExactMatrix> = generators
        .iter()
        .map(|g| {
            g.exact
                .as_ref()
                .ok_or_else(|| Error::NotExact(format!("gate {}", g.name)))
        })
        .collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    let mut exact = vec![seed.clone()];
    let mut provenance = vec![Provenance::Seed];
    seen.insert(seed.ray_key());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (g, m) in generators.iter().zip(&mats) {
            let next = exact[i].apply(m)?;
            if seen.insert(next.ray_key()) {
                if exact.len() >= cap {
                    return Err(Error::OrbitOverflow { cap });
                }
                queue.push_back(exact.len());
                exact.push(next);
                provenance.push(Provenance::Gate {
                    parent: i,
                    gate: g.name.clone(),
                });
            }
        }
    }
    Ok(OrbitFamily {
        seed: seed.to_pure(),
        states: exact.iter().map(ExactState::to_pure).collect(),
        exact: Some(exact),
        provenance,
        generators: generators.iter().map(|g| g.name.clone()).collect(),
    })
}

fn check_generators(dim: usize, generators: &[Gate]) -> Result<()> {
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
    }
    Ok(())
}

/// True iff `g O g^dagger` is a unit multiple of some WH representative for
/// every representative `O`.
pub fn is_clifford(gate: &Gate, group: &WhGroup) -> Result<bool> {
    let n = group.total_dim();
    if gate.dim() != n {
        return Err(Error::DimMismatch {
            expected: n,
            found: gate.dim(),
        });
    }
    let u = &gate.matrix;
    let ud = u.adjoint();
    for op in group.operators() {
        let conj = u * op.matrix() * &ud;
        let hit = group.operators().iter().any(|r| {
            // overlap tr(R^dag M)/n has modulus 1 iff M = phase * R
            let lambda = (r.matrix().adjoint() * &conj).trace() / n as f64;
            (lambda.norm() - 1.0).abs() <= 1e-10
                && (&conj - r.matrix() * lambda)
                    .iter()
                    .all(|z| z.norm() <= 1e-10)
        });
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}
