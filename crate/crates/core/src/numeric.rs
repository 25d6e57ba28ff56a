//! Exact arithmetic foundation: primes, p-adic valuations, rationals and
//! residues modulo prime powers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("residue levels differ ({0} vs {1})")]
    LevelMismatch(u32, u32),
    #[error("residue primes differ ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("residue level must be at least 1")]
    ZeroLevel,
}

/// A rational prime `p`. It plays the role of the uniformizer and of the
/// residue field cardinality `q` for the base field `Q_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrimeSpec(u64);

impl PrimeSpec {
    pub fn new(p: u64) -> Result<Self, NumericError> {
        if is_prime(p) {
            Ok(PrimeSpec(p))
        } else {
            Err(NumericError::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^k` as a big integer.
    pub fn pow(self, k: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.0), k as usize)
    }

    /// `q^{-k}` as an exact rational.
    pub fn inv_pow(self, k: u64) -> Rational {
        Rational::new(BigInt::one(), num_traits::pow(BigInt::from(self.0), k as usize))
    }

    /// The absolute value `|x| = q^{-v(x)}`, zero for `x = 0`.
    pub fn abs_value(self, x: &BigInt) -> Rational {
        match p_valuation(x, self) {
            Valuation::Infinite => Rational::zero(),
            Valuation::Finite(k) => self.inv_pow(k),
        }
    }
}

impl fmt::Display for PrimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Extended natural number: a p-adic valuation, `Infinite` only for zero.
///
/// `Finite(_) < Infinite`, so `min` behaves as in the valuation calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(k) => s.serialize_u64(*k),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Largest `k` with `p^k | x`; `Infinite` iff `x = 0`.
pub fn p_valuation(x: &BigInt, p: PrimeSpec) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = p.to_bigint();
    let mut k = 0u64;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Valuation::Finite(k);
        }
        y = q;
        k += 1;
    }
}

/// Valuation of a machine integer, a fast path used by the point counter.
pub fn p_valuation_u64(mut x: u64, p: u64) -> Valuation {
    if x == 0 {
        return Valuation::Infinite;
    }
    let mut k = 0;
    while x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    Valuation::Finite(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rational_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational, NumericError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(NumericError::DivisionByZero);
            }
            a / b
        }
    })
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Render a rational as `"a/b"` or `"a"` when integral.
pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter: rationals as strings.
pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

pub fn serialize_rationals<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(rational_string))
}

pub fn serialize_bigints<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

/// Element of `Z / p^level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModResidue {
    value: BigInt,
    level: u32,
    prime: PrimeSpec,
}

impl ModResidue {
    pub fn new(value: &BigInt, level: u32, prime: PrimeSpec) -> Result<Self, NumericError> {
        if level == 0 {
            return Err(NumericError::ZeroLevel);
        }
        let m = prime.pow(level);
        Ok(ModResidue { value: value.mod_floor(&m), level, prime })
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn prime(&self) -> PrimeSpec {
        self.prime
    }

    pub fn modulus(&self) -> BigInt {
        self.prime.pow(self.level)
    }

    fn check(&self, other: &Self) -> Result<(), NumericError> {
        if self.prime != other.prime {
            return Err(NumericError::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        if self.level != other.level {
            return Err(NumericError::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, NumericError> {
        self.check(other)?;
        ModResidue::new(&(&self.value + &other.value), self.level, self.prime)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NumericError> {
        self.check(other)?;
        ModResidue::new(&(&self.value * &other.value), self.level, self.prime)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Valuation of the residue, capped: values `>= level` are reported as
    /// `Infinite` since they are not determined.
    pub fn valuation(&self) -> Valuation {
        p_valuation(&self.value, self.prime)
    }
}

/// Compare two rationals, handy in sorting closures.
pub fn cmp_rational(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}
