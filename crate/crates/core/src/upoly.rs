//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numeric::{rational_string, Rational};

/// Coefficients are stored low degree first; trailing zeros are trimmed so
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        UPoly::new(v)
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        UPoly::new(xs.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&(Rational::one() / lc))
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Number of leading factors of `t` (lowest nonzero degree).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divide out the largest power of `t`.
    pub fn strip_t_power(&self) -> Self {
        match self.low_order() {
            None => self.clone(),
            Some(k) => UPoly::new(self.coeffs[k..].to_vec()),
        }
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let lc_inv = Rational::one() / d.leading();
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = &r[k] * &lc_inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                r[idx] = &r[idx] - &c * dc;
            }
            q[k - dd] = c;
        }
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero iff both are zero).
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `g = gcd(a, m)` monic and `s*a ≡ g (mod m)`.
    pub fn ext_gcd_mod(a: &UPoly, m: &UPoly) -> (UPoly, UPoly) {
        let (mut r0, mut r1) = (m.clone(), a.rem(m));
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.is_zero() {
            return (r0, s0);
        }
        let inv = Rational::one() / r0.leading();
        (r0.scale(&inv), s0.scale(&inv))
    }

    /// Square-free part (monic).
    pub fn squarefree(&self) -> UPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = UPoly::gcd(self, &self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    pub fn pow(&self, k: u32) -> UPoly {
        let mut acc = UPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Truncate to degrees `< n`.
    pub fn truncate(&self, n: usize) -> UPoly {
        UPoly::new(self.coeffs.iter().take(n).cloned().collect())
    }

    /// Render with the given variable name, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let cs = rational_string(&a);
            match k {
                0 => out.push_str(&cs),
                _ => {
                    if !a.is_one() {
                        out.push_str(&cs);
                        out.push('*');
                    }
                    out.push_str(var);
                    if k > 1 {
                        out.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn division_and_gcd() {
        // (t-1)(t+2) and (t-1)(t-3)
        let a = UPoly::from_ints(&[-2, 1, 1]);
        let b = UPoly::from_ints(&[3, -4, 1]);
        assert_eq!(UPoly::gcd(&a, &b), UPoly::from_ints(&[-1, 1]));
        let (q, r) = a.div_rem(&UPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, UPoly::from_ints(&[2, 1]));
    }

    #[test]
    fn inverse_mod() {
        let m = UPoly::from_ints(&[1, 0, 1]); // t^2 + 1
        let a = UPoly::from_ints(&[1, 1]);
        let (g, s) = UPoly::ext_gcd_mod(&a, &m);
        assert_eq!(g, UPoly::one());
        assert_eq!((&s * &a).rem(&m), UPoly::one());
    }

    #[test]
    fn squarefree_and_display() {
        let a = UPoly::from_ints(&[1, -1]).pow(3); // (1-t)^3
        assert_eq!(a.squarefree(), UPoly::from_ints(&[-1, 1]));
        let p = UPoly::new(vec![rat(4, 5), rat(0, 1), rat(-1, 25)]);
        assert_eq!(p.to_string(), "-1/25*t^2 + 4/5");
        assert_eq!(UPoly::from_ints(&[0, 0, 3]).strip_t_power(), UPoly::from_ints(&[3]));
    }
}
