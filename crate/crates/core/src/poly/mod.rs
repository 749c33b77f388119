//! Exact arithmetic on integer polynomials.
//!
//! [`IntPoly`] is the defining datum of every number field in this crate.
//! The submodules add real-root counting and isolation ([`sturm`]),
//! factorization patterns modulo primes ([`modp`]) and coefficientwise
//! CRT recombination ([`crt`]).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub mod crt;
pub mod modp;
pub mod sturm;

pub use crt::crt_lift;
pub use modp::{degree_pattern_mod, is_prime, roots_mod, DegreePattern};
pub use sturm::{isolate_real_roots, sturm_real_root_count, RootInterval, RootIsolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not squarefree over the rationals")]
    NotSquarefree,
    #[error("reduction modulo {0} is not squarefree")]
    NotSquarefreeModP(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("the zero polynomial has no roots to count")]
    Zero,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u64, u64),
    #[error("cannot parse polynomial coefficients: {0}")]
    Parse(String),
}

/// A polynomial with arbitrary-precision integer coefficients, lowest degree
/// first. Trailing zeros are never stored, so the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    /// The monic polynomial `(X - r_1)(X - r_2)...(X - r_k)`.
    pub fn from_roots(roots: &[BigInt]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            acc.mul(&IntPoly::new(vec![-r.clone(), BigInt::one()]))
        })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content, keeping the sign of every coefficient.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|x| x / &c).collect() }
    }

    /// Evaluate at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Sign of the value at a rational point, computed without fractions:
    /// for `x = n/m` with `m > 0` this is the sign of `m^deg * f(n/m)`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let n = x.numer();
        let m = x.denom();
        let mut acc = BigInt::zero();
        let mut mpow = BigInt::one();
        // Horner on the homogenized form: sum c_k n^k m^(deg-k)
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &mpow;
            mpow *= m;
        }
        sign_of(&acc)
    }

    /// Pseudo-remainder scaled by a positive constant: returns `r` with
    /// `c * self = q * divisor + r`, `c > 0` and `deg r < deg divisor`.
    /// The positivity of `c` is what makes this usable in Sturm chains.
    pub fn positive_pseudo_rem(&self, divisor: &Self) -> Self {
        let db = divisor.degree().expect("division by the zero polynomial");
        let Some(da) = self.degree() else { return Self::zero() };
        if da < db {
            return self.clone();
        }
        let lead = divisor.leading().unwrap().clone();
        let delta = (da - db + 1) as u32;
        let mut r = self.clone();
        let mut steps = 0u32;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let mut shifted = vec![BigInt::zero(); dr - db];
            shifted.extend(divisor.coeffs.iter().map(|c| c * &lr));
            r = r.scale(&lead).sub(&IntPoly::new(shifted));
            steps += 1;
        }
        let r = r.scale(&num_traits::pow(lead.clone(), (delta - steps) as usize));
        if lead.is_negative() && delta % 2 == 1 {
            r.neg()
        } else {
            r
        }
    }

    /// Exact quotient `self / divisor` in `Z[X]`, or `None` if the division
    /// leaves a remainder or a non-integral coefficient.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let db = divisor.degree()?;
        let lead = divisor.leading().unwrap();
        let mut r = self.clone();
        let Some(da) = r.degree() else { return Some(Self::zero()) };
        if da < db {
            return None;
        }
        let mut q = vec![BigInt::zero(); da - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (t, rem) = r.leading().unwrap().div_rem(lead);
            if !rem.is_zero() {
                return None;
            }
            let k = dr - db;
            let mut shifted = vec![BigInt::zero(); k];
            shifted.extend(divisor.coeffs.iter().map(|c| c * &t));
            r = r.sub(&IntPoly::new(shifted));
            q[k] = t;
        }
        Some(IntPoly::new(q))
    }

    /// Primitive gcd over the rationals with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.positive_pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading().is_some_and(Signed::is_negative) {
            a.neg()
        } else {
            a
        }
    }

    /// `f / gcd(f, f')`, normalized to a positive leading coefficient.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            let p = self.primitive_part();
            return if p.leading().is_some_and(Signed::is_negative) { p.neg() } else { p };
        }
        let q = self.div_exact(&g).expect("gcd divides its argument");
        let q = q.primitive_part();
        if q.leading().is_some_and(Signed::is_negative) {
            q.neg()
        } else {
            q
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Comma-separated coefficient list, lowest degree first (`-1,-4,0,1`).
    pub fn to_coeff_list(&self) -> String {
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl FromStr for IntPoly {
    type Err = PolyError;

    /// Parses the coefficient-list form produced by [`IntPoly::to_coeff_list`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs = s
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(|_| PolyError::Parse(t.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{mag}*X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{mag}*X^{i}")?,
            }
        }
        Ok(())
    }
}
