//! Sparse multivariate polynomials with integer coefficients.
//!
//! Terms live in a map keyed by [`Monomial`] under graded lexicographic
//! order, which fixes the canonical text form, e.g. `3*x1^2*x2 + x2^3 - 7`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{p_valuation, ModResidue, NumericError, PrimeSpec, Valuation};

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MpolyError {
    #[error("expected a point with {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("variable `{0}` occurs in both summands")]
    VariableCollision(String),
    #[error("variable sets differ")]
    VariableMismatch,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent at byte {pos} exceeds {MAX_EXPONENT}")]
    ExponentOverflow { pos: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Exponent vector `ω` of a monomial `x^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Weighted degree `a · ω`.
    pub fn dot(&self, a: &[i64]) -> i64 {
        self.0.iter().zip(a).map(|(&e, &w)| e as i64 * w).sum()
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of `f ↦ p^{-e} f(P + p x)` or of a monomial rescaling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftScaleResult {
    /// The extracted order `e`.
    pub order: u64,
    /// The transformed polynomial, with content prime to `p`.
    pub transformed: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero(vars: Vec<String>) -> Self {
        Polynomial { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vec<String>, c: impl Into<BigInt>) -> Self {
        let n = vars.len();
        Polynomial::from_terms(vars, [(Monomial::one(n), c.into())])
    }

    /// The coordinate function `x_i`.
    pub fn var(vars: Vec<String>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Polynomial::from_terms(vars, [(Monomial(e), BigInt::one())])
    }

    /// Build from `(monomial, coefficient)` pairs; repeated monomials are
    /// summed and zero coefficients dropped.
    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "monomial arity");
            *map.entry(m).or_insert_with(BigInt::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial { vars, terms: map }
    }

    /// Convenience constructor from small exponent/coefficient tables.
    pub fn from_table(vars: &[&str], table: &[(&[u32], i64)]) -> Self {
        Polynomial::from_terms(
            vars.iter().map(|s| s.to_string()).collect(),
            table.iter().map(|(e, c)| (Monomial(e.to_vec()), BigInt::from(*c))),
        )
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> BTreeSet<Monomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Same terms over a different (same-length) variable list.
    pub fn with_vars(&self, vars: Vec<String>) -> Result<Self, MpolyError> {
        if vars.len() != self.vars.len() {
            return Err(MpolyError::VariableMismatch);
        }
        Ok(Polynomial { vars, terms: self.terms.clone() })
    }

    fn same_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_vars(other);
        Polynomial::from_terms(
            self.vars.clone(),
            self.terms.iter().chain(other.terms.iter()).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Polynomial::from_terms(self.vars.clone(), self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_vars(other);
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = Monomial(m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect());
                *out.entry(m).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Polynomial { vars: self.vars.clone(), terms: out }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Polynomial::constant(self.vars.clone(), 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divide every coefficient by `d`, which must divide the content.
    pub fn div_exact(&self, d: &BigInt) -> Self {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    debug_assert!((c % d).is_zero());
                    (m.clone(), c / d)
                })
                .collect(),
        }
    }

    /// Keep only the terms whose exponent lies in `support`.
    pub fn restrict(&self, support: &BTreeSet<Monomial>) -> Self {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| support.contains(*m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt, MpolyError> {
        if point.len() != self.nvars() {
            return Err(MpolyError::ArityMismatch { expected: self.nvars(), got: point.len() });
        }
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn evaluate_i64(&self, point: &[i64]) -> Result<BigInt, MpolyError> {
        let pt: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
        self.evaluate(&pt)
    }

    /// Evaluate at residues modulo `p^m`; all coordinates must share the
    /// same prime and level.
    pub fn evaluate_mod(&self, point: &[ModResidue]) -> Result<ModResidue, MpolyError> {
        if point.len() != self.nvars() {
            return Err(MpolyError::ArityMismatch { expected: self.nvars(), got: point.len() });
        }
        let Some(first) = point.first() else {
            return Err(MpolyError::ArityMismatch { expected: 1, got: 0 });
        };
        let (prime, level) = (first.prime(), first.level());
        for r in point {
            if r.prime() != prime {
                return Err(NumericError::PrimeMismatch(prime.get(), r.prime().get()).into());
            }
            if r.level() != level {
                return Err(NumericError::LevelMismatch(level, r.level()).into());
            }
        }
        let modulus = prime.pow(level);
        let mut acc = BigInt::zero();
        for (mono, c) in &self.terms {
            let mut t = c.mod_floor(&modulus);
            for (x, &e) in point.iter().zip(&mono.0) {
                if e > 0 {
                    t = (t * x.value().modpow(&BigInt::from(e), &modulus)) % &modulus;
                }
            }
            acc = (acc + t) % &modulus;
        }
        Ok(ModResidue::new(&acc, level, prime)?)
    }

    pub fn partial(&self, i: usize) -> Self {
        Polynomial::from_terms(
            self.vars.clone(),
            self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e[i];
                e[i] -= 1;
                (Monomial(e), c * BigInt::from(k))
            }),
        )
    }

    /// Formal partial derivatives, one per variable.
    pub fn partials(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.partial(i)).collect()
    }

    /// Substitute `x_i ↦ shift_i + scale_i · x_i` and expand.
    pub fn compose_affine(&self, shift: &[BigInt], scale: &[BigInt]) -> Result<Self, MpolyError> {
        let n = self.nvars();
        if shift.len() != n || scale.len() != n {
            return Err(MpolyError::ArityMismatch { expected: n, got: shift.len().min(scale.len()) });
        }
        // expansions[i][d][k] = coefficient of x_i^k in (shift_i + scale_i x_i)^d
        let expansions: Vec<Vec<Vec<BigInt>>> = (0..n)
            .map(|i| {
                let maxd = self.degree_in(i) as usize;
                let mut rows = vec![vec![BigInt::one()]];
                for d in 1..=maxd {
                    let prev = &rows[d - 1];
                    let mut row = vec![BigInt::zero(); d + 1];
                    for (k, c) in prev.iter().enumerate() {
                        row[k] += c * &shift[i];
                        row[k + 1] += c * &scale[i];
                    }
                    rows.push(row);
                }
                rows
            })
            .collect();
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(vec![0; n], c.clone())];
            for i in 0..n {
                let row = &expansions[i][m.0[i] as usize];
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for (e, a) in &partial {
                    for (k, b) in row.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let mut e2 = e.clone();
                        e2[i] = k as u32;
                        next.push((e2, a * b));
                    }
                }
                partial = next;
            }
            for (e, a) in partial {
                *out.entry(Monomial(e)).or_insert_with(BigInt::zero) += a;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(Polynomial { vars: self.vars.clone(), terms: out })
    }

    /// Minimal p-adic valuation over the coefficients.
    pub fn min_coeff_valuation(&self, p: PrimeSpec) -> Valuation {
        self.terms
            .values()
            .map(|c| p_valuation(c, p))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    fn extract_order(g: Polynomial, p: PrimeSpec) -> ShiftScaleResult {
        let order = g.min_coeff_valuation(p).finite().expect("nonzero polynomial");
        let transformed = g.div_exact(&p.pow(order as u32));
        ShiftScaleResult { order, transformed }
    }

    /// `(e, f_P)` with `p^e f_P(x) = f(P + p x)` and `p ∤ content(f_P)`.
    pub fn shift_scale(&self, point: &[BigInt], p: PrimeSpec) -> Result<ShiftScaleResult, MpolyError> {
        if self.is_zero() {
            return Err(MpolyError::ZeroPolynomial);
        }
        let scale = vec![p.to_bigint(); self.nvars()];
        let g = self.compose_affine(point, &scale)?;
        Ok(Polynomial::extract_order(g, p))
    }

    /// `(e, g)` with `p^e g(x) = f(p^{k_1} x_1, …, p^{k_n} x_n)` and
    /// `p ∤ content(g)`.
    pub fn monomial_scale(&self, k: &[u64], p: PrimeSpec) -> Result<ShiftScaleResult, MpolyError> {
        if self.is_zero() {
            return Err(MpolyError::ZeroPolynomial);
        }
        if k.len() != self.nvars() {
            return Err(MpolyError::ArityMismatch { expected: self.nvars(), got: k.len() });
        }
        let g = Polynomial::from_terms(
            self.vars.clone(),
            self.terms.iter().map(|(m, c)| {
                let w: u64 = m.0.iter().zip(k).map(|(&e, &ki)| e as u64 * ki).sum();
                (m.clone(), c * p.pow(w as u32))
            }),
        );
        Ok(Polynomial::extract_order(g, p))
    }

    pub fn reduce_mod_p(&self, p: PrimeSpec) -> FpPolynomial {
        let pb = p.to_bigint();
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let r = c.mod_floor(&pb).to_u64().unwrap();
                (r != 0).then(|| (m.clone(), r))
            })
            .collect();
        FpPolynomial { prime: p.get(), nvars: self.nvars(), terms }
    }

    /// `f(x) + g(y)` over the concatenated variable list.
    pub fn thom_sebastiani(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, MpolyError> {
        if let Some(v) = f.vars.iter().find(|v| g.vars.contains(v)) {
            return Err(MpolyError::VariableCollision(v.clone()));
        }
        let (n, m) = (f.nvars(), g.nvars());
        let vars: Vec<String> = f.vars.iter().chain(&g.vars).cloned().collect();
        let lift_f = f.terms.iter().map(|(mo, c)| {
            let mut e = mo.0.clone();
            e.extend(std::iter::repeat_n(0, m));
            (Monomial(e), c.clone())
        });
        let lift_g = g.terms.iter().map(|(mo, c)| {
            let mut e = vec![0; n];
            e.extend(mo.0.iter().copied());
            (Monomial(e), c.clone())
        });
        Ok(Polynomial::from_terms(vars, lift_f.chain(lift_g)))
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn write_monomial(out: &mut String, vars: &[String], m: &Monomial) {
    let mut first = true;
    for (v, &e) in vars.iter().zip(&m.0) {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(v);
        if e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            if m.is_constant() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                write_monomial(&mut out, &self.vars, m);
            }
        }
        f.write_str(&out)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Polynomial over `F_p`, coefficients in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPolynomial {
    prime: u64,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl FpPolynomial {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.prime as u128;
        let mut acc: u128 = 0;
        for (m, &c) in &self.terms {
            let mut t = c as u128;
            for (&x, &e) in point.iter().zip(&m.0) {
                t = t * pow_mod(x as u128 % p, e as u64, p) % p;
            }
            acc = (acc + t) % p;
        }
        acc as u64
    }

    pub fn partial(&self, i: usize) -> FpPolynomial {
        let p = self.prime;
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let k = m.0[i] as u64 % p;
            let coeff = (c as u128 * k as u128 % p as u128) as u64;
            if coeff == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            let entry: &mut u64 = terms.entry(Monomial(e)).or_insert(0);
            *entry = (*entry + coeff) % p;
        }
        terms.retain(|_, c| *c != 0);
        FpPolynomial { prime: p, nvars: self.nvars, terms }
    }

    pub fn partials(&self) -> Vec<FpPolynomial> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Lift coefficients back to `[0, p)` integers.
    pub fn to_integer_poly(&self, vars: Vec<String>) -> Polynomial {
        Polynomial::from_terms(vars, self.terms.iter().map(|(m, &c)| (m.clone(), BigInt::from(c))))
    }
}

pub(crate) fn pow_mod(mut b: u128, mut e: u64, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

// ---------------------------------------------------------------------------
// Text parsing

/// Split an identifier into alphabetic prefix and numeric suffix so that
/// `x2 < x10`.
fn natural_key(s: &str) -> (String, u128, String) {
    let idx = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (head, tail) = s.split_at(idx);
    let num = tail.parse::<u128>().unwrap_or(0);
    (head.to_string(), num, s.to_string())
}

/// Sort variable names naturally (`x1 < x2 < x10 < y`).
pub fn natural_sort(vars: &mut [String]) {
    vars.sort_by_key(|v| natural_key(v));
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> MpolyError {
        MpolyError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn number(&mut self) -> BigInt {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap()
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8(self.src[start..self.pos].to_vec()).unwrap()
    }
}

type RawTerm = (BigInt, BTreeMap<String, u64>);

fn parse_raw(text: &str) -> Result<Vec<RawTerm>, MpolyError> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut sign = BigInt::one();
        match lx.peek() {
            None if first => return Err(lx.err("empty polynomial")),
            None => return Err(lx.err("expected a term after operator")),
            Some(b'+') if !first => lx.pos += 1,
            Some(b'-') => {
                lx.pos += 1;
                sign = -sign;
            }
            Some(_) if !first => return Err(lx.err("expected `+` or `-`")),
            Some(_) => {}
        }
        first = false;
        let mut coeff = sign;
        let mut powers: BTreeMap<String, u64> = BTreeMap::new();
        let mut factors = 0usize;
        loop {
            match lx.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= lx.number();
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = lx.ident();
                    let mut e = 1u64;
                    if lx.peek() == Some(b'^') {
                        lx.pos += 1;
                        match lx.peek() {
                            Some(c) if c.is_ascii_digit() => {
                                let at = lx.pos;
                                let n = lx.number();
                                e = match n.to_u64() {
                                    Some(v) if v <= MAX_EXPONENT => v,
                                    _ => return Err(MpolyError::ExponentOverflow { pos: at }),
                                };
                            }
                            _ => return Err(lx.err("expected exponent after `^`")),
                        }
                    }
                    let tot = powers.entry(name).or_insert(0);
                    *tot += e;
                    if *tot > MAX_EXPONENT {
                        return Err(MpolyError::ExponentOverflow { pos: lx.pos });
                    }
                }
                _ => return Err(lx.err("expected a coefficient or variable")),
            }
            factors += 1;
            match lx.peek() {
                Some(b'*') => {
                    lx.pos += 1;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
                Some(c) if c.is_ascii_digit() && factors > 0 => {
                    return Err(lx.err("number after factor needs `*`"));
                }
                _ => break,
            }
        }
        terms.push((coeff, powers));
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(terms)
}

fn assemble(raw: Vec<RawTerm>, vars: Vec<String>) -> Result<Polynomial, MpolyError> {
    let index: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut out = Vec::with_capacity(raw.len());
    for (c, powers) in raw {
        let mut e = vec![0u32; vars.len()];
        for (name, k) in powers {
            let Some(&i) = index.get(name.as_str()) else {
                return Err(MpolyError::Syntax { pos: 0, msg: format!("unknown variable `{name}`") });
            };
            e[i] = k as u32;
        }
        out.push((Monomial(e), c));
    }
    Ok(Polynomial::from_terms(vars, out))
}

/// Parse the canonical text form. Variables are the identifiers that occur,
/// sorted naturally.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, MpolyError> {
    let raw = parse_raw(text)?;
    let mut vars: Vec<String> = raw
        .iter()
        .flat_map(|(_, p)| p.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    natural_sort(&mut vars);
    assemble(raw, vars)
}

/// Parse over an explicit variable list (identifiers outside it are errors).
pub fn parse_polynomial_in(text: &str, vars: &[&str]) -> Result<Polynomial, MpolyError> {
    let raw = parse_raw(text)?;
    assemble(raw, vars.iter().map(|s| s.to_string()).collect())
}

impl FromStr for Polynomial {
    type Err = MpolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s)
    }
}
