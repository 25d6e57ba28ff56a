//! Rational functions `P(t) / ∏ (1 - q^{-A} t^B)` in `t = q^{-s}` at a
//! fixed prime `q`, their power series, and recovery of `P` from a series
//! prefix.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{rational_string, PrimeSpec, Rational};
use crate::tsden::factor_text;
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatfunError {
    #[error("series has depth {have}, at least {need} is required")]
    InsufficientDepth { need: usize, have: usize },
    #[error("denominator does not fit the series: first nonzero residual at t^{first}")]
    Mismatch { first: usize, residuals: Vec<Rational> },
}

/// Finite prefix `c_0 + c_1 t + … + c_depth t^depth`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PowerSeries {
    #[serde(serialize_with = "crate::numeric::serialize_rationals")]
    pub coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        PowerSeries { coeffs }
    }

    /// Index of the last known coefficient.
    pub fn depth(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn truncate(&self, depth: usize) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().take(depth + 1).cloned().collect() }
    }

    /// Product with a polynomial, keeping the known prefix.
    pub fn mul_poly(&self, p: &UPoly) -> PowerSeries {
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in p.coeffs().iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for j in 0..n - i {
                out[i + j] += a * &self.coeffs[j];
            }
        }
        PowerSeries { coeffs: out }
    }

    pub fn strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_string).collect()
    }
}

/// `∏ (1 - q^{-A} t^B)` as a polynomial.
pub fn denominator_poly(factors: &[(u64, u64)], q: PrimeSpec) -> UPoly {
    factors.iter().fold(UPoly::one(), |acc, &(a, b)| &acc * &factor_poly(a, b, q))
}

fn factor_poly(a: u64, b: u64, q: PrimeSpec) -> UPoly {
    &UPoly::one() - &UPoly::monomial(q.inv_pow(a), b as usize)
}

fn total_order(factors: &[(u64, u64)]) -> usize {
    factors.iter().map(|&(_, b)| b as usize).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalZeta {
    pub numerator: UPoly,
    /// `(A, B)` for each factor `1 - q^{-A} t^B`.
    pub factors: Vec<(u64, u64)>,
    pub q: PrimeSpec,
}

impl RationalZeta {
    pub fn new(numerator: UPoly, factors: Vec<(u64, u64)>, q: PrimeSpec) -> Self {
        RationalZeta { numerator, factors, q }
    }

    pub fn denominator(&self) -> UPoly {
        denominator_poly(&self.factors, self.q)
    }

    /// Maclaurin coefficients up to `t^depth`.
    pub fn expand(&self, depth: usize) -> PowerSeries {
        let mut s: Vec<Rational> = (0..=depth).map(|k| self.numerator.coeff(k)).collect();
        for &(a, b) in &self.factors {
            let c = self.q.inv_pow(a);
            let b = b as usize;
            for m in b..=depth {
                let add = &c * &s[m - b];
                s[m] += add;
            }
        }
        PowerSeries { coeffs: s }
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn same_function(&self, other: &RationalZeta) -> bool {
        assert_eq!(self.q, other.q);
        &self.numerator * &other.denominator() == &other.numerator * &self.denominator()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let factors: Vec<serde_json::Value> =
            self.factors.iter().map(|&(a, b)| serde_json::json!({ "qpow": a, "tpow": b })).collect();
        serde_json::json!({
            "numerator": self.numerator.to_string(),
            "numerator_coeffs": self.numerator.coeffs().iter().map(rational_string).collect::<Vec<_>>(),
            "factors": factors,
            "q": self.q.get(),
            "text": self.to_string(),
        })
    }
}

impl fmt::Display for RationalZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.numerator)?;
        if !self.factors.is_empty() {
            f.write_str(" / ")?;
            let body: String =
                self.factors.iter().map(|&(a, b)| format!("({})", factor_text(a as i64, b as i64))).collect();
            if self.factors.len() == 1 {
                f.write_str(&body)?;
            } else {
                write!(f, "({body})")?;
            }
        }
        Ok(())
    }
}

/// Whether the series satisfies the recurrence of `∏ (1 - q^{-A} t^B)` from
/// index `start` on.
pub fn check_recurrence(
    series: &PowerSeries,
    factors: &[(u64, u64)],
    q: PrimeSpec,
    start: usize,
) -> Result<bool, RatfunError> {
    let need = start + total_order(factors);
    if series.depth() < need {
        return Err(RatfunError::InsufficientDepth { need, have: series.depth() });
    }
    let prod = series.mul_poly(&denominator_poly(factors, q));
    Ok(prod.coeffs[start..].iter().all(Zero::is_zero))
}

/// `P = series · ∏ (1 - q^{-A} t^B)` truncated at `max_deg`, provided every
/// coefficient of degree in `(max_deg, depth]` vanishes. At least one such
/// residual is required.
pub fn recover_numerator(
    series: &PowerSeries,
    factors: &[(u64, u64)],
    q: PrimeSpec,
    max_deg: usize,
) -> Result<UPoly, RatfunError> {
    let need = max_deg + 1;
    if series.depth() < need {
        return Err(RatfunError::InsufficientDepth { need, have: series.depth() });
    }
    let prod = series.mul_poly(&denominator_poly(factors, q));
    let residuals = prod.coeffs[max_deg + 1..].to_vec();
    if let Some(i) = residuals.iter().position(|c| !c.is_zero()) {
        return Err(RatfunError::Mismatch { first: max_deg + 1 + i, residuals });
    }
    Ok(UPoly::new(prod.coeffs[..=max_deg].to_vec()))
}

/// Outcome of cancelling common factors of numerator and denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub numerator: UPoly,
    pub denominator: UPoly,
    /// Real parts `-A/B` of factors that still contribute roots.
    pub surviving_poles: BTreeSet<Rational>,
    /// Real parts whose factors cancel completely.
    pub cancelled_poles: BTreeSet<Rational>,
}

impl Reduction {
    pub fn surviving_strings(&self) -> Vec<String> {
        self.surviving_poles.iter().map(rational_string).collect()
    }
}

/// Cancel `gcd(P, D)` and report which candidate real parts survive.
pub fn reduce(z: &RationalZeta) -> Reduction {
    let d = z.denominator();
    let g = UPoly::gcd(&z.numerator, &d);
    let (num, den) = if g.is_zero() {
        (z.numerator.clone(), d.clone())
    } else {
        let den = d.div_exact(&g).unwrap();
        let c = Rational::one() / den.coeff(0);
        (z.numerator.div_exact(&g).unwrap().scale(&c), den.scale(&c))
    };
    let mut surviving = BTreeSet::new();
    let mut all = BTreeSet::new();
    for &(a, b) in &z.factors {
        let pole = -Rational::new((a as i64).into(), (b as i64).into());
        all.insert(pole.clone());
        if !UPoly::gcd(&den, &factor_poly(a, b, z.q)).is_constant() {
            surviving.insert(pole);
        }
    }
    let cancelled = all.difference(&surviving).cloned().collect();
    Reduction { numerator: num, denominator: den, surviving_poles: surviving, cancelled_poles: cancelled }
}
