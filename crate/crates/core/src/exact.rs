//! Exact states over the Gaussian rationals `(Z[i]) / m`.
//!
//! Every two-qubit stabilizer and maximal-magic state has such a
//! representative up to global phase, so orbit counts and `Xi_2` values of
//! catalog states can be computed with no rounding at all.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::states::PureState;

/// `re + i im` with arbitrary-precision parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// `i^k`.
    pub fn unit(k: u8) -> Self {
        match k % 4 {
            0 => Self::new(1, 0),
            1 => Self::new(0, 1),
            2 => Self::new(-1, 0),
            _ => Self::new(0, -1),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn scale_down(&self, k: &BigInt) -> Self {
        Self {
            re: &self.re / k,
            im: &self.im / k,
        }
    }
}

impl Add for &GaussianInt {
    type Output = GaussianInt;
    fn add(self, o: Self) -> GaussianInt {
        GaussianInt {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;
    fn sub(self, o: Self) -> GaussianInt {
        GaussianInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;
    fn mul(self, o: Self) -> GaussianInt {
        GaussianInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Square matrix with Gaussian-integer entries over a common positive integer
/// denominator. Row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    dim: usize,
    entries: Vec<GaussianInt>,
    den: BigInt,
}

impl ExactMatrix {
    pub fn new(dim: usize, entries: Vec<GaussianInt>, den: impl Into<BigInt>) -> Self {
        assert_eq!(entries.len(), dim * dim, "exact matrix shape");
        Self {
            dim,
            entries,
            den: den.into(),
        }
    }

    pub fn from_i64(dim: usize, entries: &[(i64, i64)], den: i64) -> Self {
        Self::new(
            dim,
            entries
                .iter()
                .map(|&(a, b)| GaussianInt::new(a, b))
                .collect(),
            den,
        )
    }

    pub fn identity(dim: usize) -> Self {
        let mut e = vec![GaussianInt::zero(); dim * dim];
        for k in 0..dim {
            e[k * dim + k] = GaussianInt::one();
        }
        Self::new(dim, e, 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> &GaussianInt {
        &self.entries[r * self.dim + c]
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim * other.dim;
        let mut e = vec![GaussianInt::zero(); n * n];
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.entry(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        e[(r1 * other.dim + r2) * n + c1 * other.dim + c2] =
                            a * other.entry(r2, c2);
                    }
                }
            }
        }
        Self::new(n, e, &self.den * &other.den)
    }

    pub fn to_complex(&self) -> nalgebra::DMatrix<Complex64> {
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        nalgebra::DMatrix::from_fn(self.dim, self.dim, |r, c| {
            let g = self.entry(r, c);
            Complex64::new(
                g.re.to_f64().unwrap_or(f64::NAN) / d,
                g.im.to_f64().unwrap_or(f64::NAN) / d,
            )
        })
    }
}

/// Unit vector `numerators / denominator` with Gaussian-integer numerators.
///
/// Invariant: `sum |numerator_k|^2 == denominator^2`, and the representation is
/// reduced so that no integer > 1 divides the denominator and every
/// component of every numerator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactState {
    nums: Vec<GaussianInt>,
    den: BigInt,
}

/// Exact phase-invariant key: the row `conj(c_p) * psi` of the projector,
/// where `p` is the first nonzero amplitude, reduced to lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactKey {
    nums: Vec<GaussianInt>,
    den: BigInt,
}

impl ExactState {
    pub fn new(nums: Vec<GaussianInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den: BigInt = den.into();
        if nums.is_empty() || den.is_zero() {
            return Err(Error::ZeroVector);
        }
        let (nums, den) = if den.is_negative() {
            (nums.iter().map(|g| -g).collect(), -den)
        } else {
            (nums, den)
        };
        let norm: BigInt = nums.iter().map(GaussianInt::norm_sqr).sum();
        let den_sq = &den * &den;
        if norm != den_sq {
            return Err(Error::NotUnitNorm {
                norm: norm.to_string(),
                den_sq: den_sq.to_string(),
            });
        }
        let mut s = Self { nums, den };
        s.reduce();
        Ok(s)
    }

    pub fn from_i64(nums: &[(i64, i64)], den: i64) -> Result<Self> {
        Self::new(
            nums.iter().map(|&(a, b)| GaussianInt::new(a, b)).collect(),
            den,
        )
    }

    /// Computational basis vector `|k>`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut nums = vec![GaussianInt::zero(); dim];
        nums[k] = GaussianInt::one();
        Self {
            nums,
            den: BigInt::one(),
        }
    }

    fn reduce(&mut self) {
        let mut g = self.den.clone();
        for n in &self.nums {
            g = g.gcd(&n.re).gcd(&n.im);
            if g.is_one() {
                return;
            }
        }
        if !g.is_one() && !g.is_zero() {
            for n in &mut self.nums {
                *n = n.scale_down(&g);
            }
            self.den /= &g;
        }
    }

    pub fn dim(&self) -> usize {
        self.nums.len()
    }

    pub fn numerators(&self) -> &[GaussianInt] {
        &self.nums
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// `sum |num_k|^2`, equal to `denominator^2` by construction.
    pub fn norm_squared_numerator(&self) -> BigInt {
        self.nums.iter().map(GaussianInt::norm_sqr).sum()
    }

    pub fn to_pure(&self) -> PureState {
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        let amps = self
            .nums
            .iter()
            .map(|g| {
                Complex64::new(
                    g.re.to_f64().unwrap_or(f64::NAN) / d,
                    g.im.to_f64().unwrap_or(f64::NAN) / d,
                )
            })
            .collect();
        PureState::normalize(amps).expect("exact states are nonzero")
    }

    /// `M |self>` in exact arithmetic.
    pub fn apply(&self, m: &ExactMatrix) -> Result<Self> {
        if m.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: m.dim(),
            });
        }
        let n = self.dim();
        let nums = (0..n)
            .map(|r| {
                let mut acc = GaussianInt::zero();
                for c in 0..n {
                    let e = m.entry(r, c);
                    if !e.is_zero() && !self.nums[c].is_zero() {
                        acc = &acc + &(e * &self.nums[c]);
                    }
                }
                acc
            })
            .collect();
        Self::new(nums, &self.den * m.denominator())
    }

    /// Monomial action `|k> -> i^{phase_pow[k]} |perm[k]>`.
    pub fn apply_monomial(&self, perm: &[usize], phase_pow: &[u8]) -> Self {
        let mut nums = vec![GaussianInt::zero(); self.dim()];
        for k in 0..self.dim() {
            nums[perm[k]] = &GaussianInt::unit(phase_pow[k]) * &self.nums[k];
        }
        Self {
            nums,
            den: self.den.clone(),
        }
    }

    pub fn ray_key(&self) -> ExactKey {
        let pivot = self
            .nums
            .iter()
            .find(|g| !g.is_zero())
            .expect("unit vectors have a nonzero entry")
            .conj();
        let mut key = ExactKey {
            nums: self.nums.iter().map(|g| &pivot * g).collect(),
            den: &self.den * &self.den,
        };
        let mut g = key.den.clone();
        for n in &key.nums {
            g = g.gcd(&n.re).gcd(&n.im);
        }
        if !g.is_one() {
            for n in &mut key.nums {
                *n = n.scale_down(&g);
            }
            key.den /= &g;
        }
        key
    }

    /// Exact `<self|other>` as (numerator, denominator).
    pub fn inner_product(&self, other: &Self) -> Result<(GaussianInt, BigInt)> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut acc = GaussianInt::zero();
        for (a, b) in self.nums.iter().zip(&other.nums) {
            acc = &acc + &(&a.conj() * b);
        }
        Ok((acc, &self.den * &other.den))
    }

    /// Exact `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> Result<BigRational> {
        let (n, d) = self.inner_product(other)?;
        Ok(BigRational::new(n.norm_sqr(), &d * &d))
    }

    /// Exact `|<self| M |self>|^2` for a monomial operator given as in
    /// [`ExactState::apply_monomial`].
    pub fn monomial_expectation_sq(&self, perm: &[usize], phase_pow: &[u8]) -> BigRational {
        let mut acc = GaussianInt::zero();
        for k in 0..self.dim() {
            let t = &GaussianInt::unit(phase_pow[k]) * &self.nums[k];
            acc = &acc + &(&self.nums[perm[k]].conj() * &t);
        }
        let d2 = &self.den * &self.den;
        BigRational::new(acc.norm_sqr(), &d2 * &d2)
    }
}

impl fmt::Display for ExactState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, n) in self.nums.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")/{}", self.den)
    }
}

/// `p/q` string for an exact rational.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
