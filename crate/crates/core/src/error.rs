use thiserror::Error;

use crate::optimize::MinimizerRecord;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("all amplitudes vanish; cannot normalize")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("invalid dimension {0}; need at least 2")]
    InvalidDim(usize),
    #[error("displacement index ({a1}, {a2}) out of range for d = {d}")]
    IndexOutOfRange { d: usize, a1: usize, a2: usize },
    #[error("invalid Renyi order alpha = {0}")]
    InvalidAlpha(f64),
    #[error("gradient norm {gradient_norm:e} too large for a stationary point")]
    NotAStationaryPoint { gradient_norm: f64 },
    #[error("unsupported number of qubits: {0}")]
    UnsupportedArity(usize),
    #[error("orbit exceeded the cap of {cap} states")]
    OrbitOverflow { cap: usize },
    #[error("orbit member missing from the input set (orbit of input #{index})")]
    NotClosed { index: usize },
    #[error("not an orthonormal basis: {0}")]
    NotABasis(String),
    #[error("expected {expected} states, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("association failure: magic orbit {magic_orbit} has {compatible} compatible stabilizer bases")]
    AssociationFailure {
        magic_orbit: usize,
        compatible: usize,
    },
    #[error("no partition of the stabilizer bases into mutually unbiased families")]
    NoValidPartition,
    #[error("parameter {name} = {value} outside its range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("point is not an isolated minimum (gradient {:e}, min Hessian eigenvalue {:e})", .0.gradient_norm, .0.hessian_min_eigen)]
    NotAMinimum(Box<MinimizerRecord>),
    #[error("orbit {orbit} has non-constant concurrence (spread {spread:e})")]
    NonConstantOrbit { orbit: usize, spread: f64 },
    #[error("exact state is not unit norm: |num|^2 = {norm}, denominator^2 = {den_sq}")]
    NotUnitNorm { norm: String, den_sq: String },
    #[error("exact arithmetic unavailable: {0}")]
    NotExact(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("invalid input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
