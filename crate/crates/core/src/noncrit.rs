//! Newton non-criticality: for every face `τ` of `Γ_f` the partials of the
//! face polynomial `f_τ` have no common zero with all coordinates nonzero.
//!
//! In one and two variables the question is decided over an algebraic
//! closure of `Q` by elimination. In any dimension a finite-field search
//! over auxiliary primes gives a heuristic verdict.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::mpoly::{FpPolynomial, Monomial, Polynomial};
use crate::newton::{face_polynomial, NewtonError, NewtonPolyhedron};
use crate::numeric::{PrimeSpec, Rational};
use crate::upoly::UPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NonCritical,
    Critical,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NonCritical => "non_critical",
            Verdict::Critical => "critical",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    ExactSmall,
    FiniteFieldHeuristic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonCritParams {
    /// Auxiliary primes for the finite-field search.
    pub primes: Vec<u64>,
    /// Maximal number of points examined per face and prime.
    pub point_budget: u64,
    /// Prime whose reduction is checked alongside the main verdict.
    pub reduction_prime: Option<PrimeSpec>,
}

impl Default for NonCritParams {
    fn default() -> Self {
        NonCritParams { primes: vec![101, 103, 107], point_budget: 2_000_000, reduction_prime: None }
    }
}

/// Counterexample to non-criticality on one face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// An explicit point where all partials of `f_τ` vanish, when one with
    /// small coordinates exists (integers for characteristic 0, residues
    /// for a finite field).
    #[serde(serialize_with = "crate::numeric::serialize_bigints")]
    pub point: Vec<BigInt>,
    /// Defining equations of a component of the critical locus in the torus.
    pub locus: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceFinding {
    pub face: usize,
    pub verdict: Verdict,
    /// `"char0"` or `"F_<prime>"`.
    pub field: String,
    pub witness: Option<Witness>,
}

/// Verdict of the same test over `F_p` for the working prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub prime: u64,
    pub verdict: Verdict,
    pub critical_faces: Vec<usize>,
    /// The characteristic-0 and mod-p verdicts differ.
    pub disagrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonCritReport {
    pub verdict: Verdict,
    /// The verdict rests on a finite-field search.
    pub heuristic: bool,
    pub faces: Vec<FaceFinding>,
    pub reduction: Option<ReductionCheck>,
}

impl NonCritReport {
    pub fn witnesses(&self) -> impl Iterator<Item = (usize, &Witness)> {
        self.faces.iter().filter_map(|f| f.witness.as_ref().map(|w| (f.face, w)))
    }
}

fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut all_clear = true;
    for v in verdicts {
        match v {
            Verdict::Critical => return Verdict::Critical,
            Verdict::Inconclusive => all_clear = false,
            Verdict::NonCritical => {}
        }
    }
    if all_clear {
        Verdict::NonCritical
    } else {
        Verdict::Inconclusive
    }
}

pub fn check_noncritical(f: &Polynomial, mode: Mode, params: &NonCritParams) -> Result<NonCritReport, NewtonError> {
    let poly = NewtonPolyhedron::build(f)?;
    let n = f.nvars();
    let exact = mode == Mode::ExactSmall && n <= 2;
    let faces: Vec<FaceFinding> = poly
        .faces()
        .iter()
        .enumerate()
        .map(|(i, face)| {
            let ft = face_polynomial(f, face);
            let (verdict, field, witness) = if exact {
                let (v, w) = exact_face(&ft);
                (v, "char0".to_string(), w)
            } else {
                heuristic_face(&ft, params)
            };
            FaceFinding { face: i, verdict, field, witness }
        })
        .collect();
    let verdict = combine(faces.iter().map(|x| x.verdict));
    let reduction = params.reduction_prime.map(|p| {
        let mut critical_faces = Vec::new();
        let mut complete = true;
        for (i, face) in poly.faces().iter().enumerate() {
            let ft = face_polynomial(f, face);
            match torus_zero_mod(&ft, p.get(), params.point_budget) {
                Search::Found(..) => critical_faces.push(i),
                Search::Incomplete => complete = false,
                Search::None => {}
            }
        }
        let v = if !critical_faces.is_empty() {
            Verdict::Critical
        } else if complete {
            Verdict::NonCritical
        } else {
            Verdict::Inconclusive
        };
        let disagrees = v != Verdict::Inconclusive && verdict != Verdict::Inconclusive && v != verdict;
        ReductionCheck { prime: p.get(), verdict: v, critical_faces, disagrees }
    });
    Ok(NonCritReport { verdict, heuristic: !exact, faces, reduction })
}

// ---------------------------------------------------------------------------
// finite-field search

enum Search {
    Found(Vec<u64>, bool),
    None,
    Incomplete,
}

/// Search `(F_ℓ^×)^n` for a common zero of the partials of `ft`. The flag
/// records whether the Hessian is invertible there.
fn torus_zero_mod(ft: &Polynomial, ell: u64, budget: u64) -> Search {
    let n = ft.nvars();
    let fp = ft.reduce_mod_p(PrimeSpec::new(ell).expect("auxiliary prime"));
    let grads: Vec<FpPolynomial> = fp.partials();
    let hess: Vec<Vec<FpPolynomial>> = grads.iter().map(|g| g.partials()).collect();
    let mut pt = vec![1u64; n];
    let mut seen = 0u64;
    let mut singular_hit: Option<Vec<u64>> = None;
    loop {
        if seen >= budget {
            return singular_hit.map_or(Search::Incomplete, |p| Search::Found(p, false));
        }
        seen += 1;
        if grads.iter().all(|g| g.eval(&pt) == 0) {
            let h: Vec<Vec<u64>> = hess.iter().map(|row| row.iter().map(|q| q.eval(&pt)).collect()).collect();
            if det_mod(h, ell) != 0 {
                return Search::Found(pt, true);
            }
            if singular_hit.is_none() {
                singular_hit = Some(pt.clone());
            }
        }
        // next point in lexicographic order over 1..ℓ-1
        let mut k = 0;
        loop {
            if k == n {
                return singular_hit.map_or(Search::None, |p| Search::Found(p, false));
            }
            pt[k] += 1;
            if pt[k] < ell {
                break;
            }
            pt[k] = 1;
            k += 1;
        }
    }
}

fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let pm = p as u128;
    let mut det: u128 = 1;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| !m[r][c].is_multiple_of(p)) else {
            return 0;
        };
        if r != c {
            m.swap(r, c);
            det = (pm - det) % pm;
        }
        let piv = m[c][c] as u128 % pm;
        det = det * piv % pm;
        let inv = crate::mpoly::pow_mod(piv, p - 2, pm);
        for r2 in c + 1..n {
            let factor = m[r2][c] as u128 % pm * inv % pm;
            for j in c..n {
                let sub = factor * (m[c][j] as u128 % pm) % pm;
                m[r2][j] = ((m[r2][j] as u128 % pm + pm - sub) % pm) as u64;
            }
        }
    }
    det as u64
}

fn heuristic_face(ft: &Polynomial, params: &NonCritParams) -> (Verdict, String, Option<Witness>) {
    let mut clean = true;
    for &ell in &params.primes {
        match torus_zero_mod(ft, ell, params.point_budget) {
            Search::Found(pt, true) => {
                let witness = Witness {
                    point: pt.iter().map(|&x| BigInt::from(x)).collect(),
                    locus: format!("nondegenerate critical point of the face polynomial over F_{ell}"),
                };
                return (Verdict::Critical, format!("F_{ell}"), Some(witness));
            }
            Search::Found(_, false) | Search::Incomplete => clean = false,
            Search::None => {}
        }
    }
    let field = params.primes.iter().map(|l| format!("F_{l}")).collect::<Vec<_>>().join(",");
    (if clean { Verdict::NonCritical } else { Verdict::Inconclusive }, field, None)
}

// ---------------------------------------------------------------------------
// exact elimination, n ≤ 2

/// Divide out the largest monomial factor.
fn strip_monomial(p: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let n = p.nvars();
    let low: Vec<u32> = (0..n).map(|i| p.terms().keys().map(|m| m.0[i]).min().unwrap()).collect();
    Polynomial::from_terms(
        p.vars().to_vec(),
        p.terms().iter().map(|(m, c)| (Monomial(m.0.iter().zip(&low).map(|(a, b)| a - b).collect()), c.clone())),
    )
}

fn is_constant(p: &Polynomial) -> bool {
    p.terms().keys().all(Monomial::is_constant)
}

fn rat(x: &BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

/// Coefficients in `y` (the second variable), each a polynomial in `x`.
fn as_y_poly(p: &Polynomial) -> Vec<UPoly> {
    let dy = p.degree_in(1) as usize;
    let dx = p.degree_in(0) as usize;
    let mut table = vec![vec![Rational::zero(); dx + 1]; dy + 1];
    for (m, c) in p.terms() {
        table[m.0[1] as usize][m.0[0] as usize] = rat(c);
    }
    table.into_iter().map(UPoly::new).collect()
}

fn x_poly(p: &Polynomial) -> UPoly {
    let dx = p.degree_in(0) as usize;
    let mut v = vec![Rational::zero(); dx + 1];
    for (m, c) in p.terms() {
        v[m.0[0] as usize] = rat(c);
    }
    UPoly::new(v)
}

/// Determinant of a matrix over `Q[x]` by fraction-free elimination.
fn det_upoly(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    if n == 0 {
        return UPoly::one();
    }
    let mut negate = false;
    let mut prev = UPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return UPoly::zero();
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// `Res_y(a, b)` for `deg_y a, deg_y b ≥ 1`.
fn resultant_y(a: &[UPoly], b: &[UPoly]) -> UPoly {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let size = da + db;
    let mut m = vec![vec![UPoly::zero(); size]; size];
    for r in 0..db {
        for (k, c) in a.iter().rev().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..da {
        for (k, c) in b.iter().rev().enumerate() {
            m[db + r][r + k] = c.clone();
        }
    }
    det_upoly(m)
}

/// A polynomial in `y` over `Q[x]/(h)`, coefficients low degree first.
type YPoly = Vec<UPoly>;

fn trim(mut p: YPoly, h: &UPoly) -> YPoly {
    for c in p.iter_mut() {
        *c = c.rem(h);
    }
    while p.last().is_some_and(UPoly::is_zero) {
        p.pop();
    }
    p
}

/// gcd in `y` over every factor field of `Q[x]/(h)`, splitting `h` when a
/// leading coefficient is a zero divisor. Returns `(h_i, monic gcd)`.
fn dynamic_gcd(h: UPoly, a: YPoly, b: YPoly) -> Vec<(UPoly, YPoly)> {
    let a = trim(a, &h);
    let b = trim(b, &h);
    if b.is_empty() {
        if a.is_empty() {
            return vec![(h, a)];
        }
        let lc = a.last().unwrap().clone();
        let (g, inv) = UPoly::ext_gcd_mod(&lc, &h);
        if !g.is_constant() {
            return split(h, &g, a, b);
        }
        let monic: YPoly = a.iter().map(|c| (c * &inv).rem(&h)).collect();
        return vec![(h, monic)];
    }
    let lc = b.last().unwrap().clone();
    let (g, inv) = UPoly::ext_gcd_mod(&lc, &h);
    if !g.is_constant() {
        return split(h, &g, a, b);
    }
    if a.len() < b.len() {
        return dynamic_gcd(h, b, a);
    }
    // one pseudo-free reduction step: a - (lc(a)/lc(b)) y^k b
    let mut r = a.clone();
    let k = a.len() - b.len();
    let factor = (a.last().unwrap() * &inv).rem(&h);
    for (j, c) in b.iter().enumerate() {
        r[j + k] = &r[j + k] - &(&factor * c);
    }
    dynamic_gcd(h, b, r)
}

fn split(h: UPoly, g: &UPoly, a: YPoly, b: YPoly) -> Vec<(UPoly, YPoly)> {
    let h1 = g.clone();
    let h2 = h.div_exact(&h1).expect("gcd divides modulus").monic();
    let mut out = dynamic_gcd(h1, a.clone(), b.clone());
    if !h2.is_constant() {
        out.extend(dynamic_gcd(h2, a, b));
    }
    out
}

fn y_poly_string(p: &YPoly) -> String {
    let mut parts = Vec::new();
    for (j, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let coef = format!("({})", c.display_with("x"));
        parts.push(match j {
            0 => coef,
            1 => format!("{coef}*y"),
            _ => format!("{coef}*y^{j}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Small nonzero integer point where all of `polys` vanish.
fn small_torus_point(polys: &[Polynomial], n: usize, radius: i64) -> Option<Vec<BigInt>> {
    let range: Vec<i64> = (1..=radius).flat_map(|x| [x, -x]).collect();
    let mut idx = vec![0usize; n];
    loop {
        let pt: Vec<BigInt> = idx.iter().map(|&i| BigInt::from(range[i])).collect();
        if polys.iter().all(|p| p.evaluate(&pt).map(|v| v.is_zero()).unwrap_or(false)) {
            return Some(pt);
        }
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            idx[k] += 1;
            if idx[k] < range.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn critical(polys: &[Polynomial], n: usize, locus: String) -> (Verdict, Option<Witness>) {
    let point = small_torus_point(polys, n, 10).unwrap_or_default();
    (Verdict::Critical, Some(Witness { point, locus }))
}

/// Decide one face in characteristic 0 (`n ≤ 2`).
fn exact_face(ft: &Polynomial) -> (Verdict, Option<Witness>) {
    let n = ft.nvars();
    let grads = ft.partials();
    match n {
        0 => (Verdict::NonCritical, None),
        1 => {
            let d = strip_monomial(&grads[0]);
            if d.is_zero() || !is_constant(&d) {
                let locus = if d.is_zero() { "all x".to_string() } else { format!("{d} = 0") };
                critical(&grads, 1, locus)
            } else {
                (Verdict::NonCritical, None)
            }
        }
        _ => {
            let a = strip_monomial(&grads[0]);
            let b = strip_monomial(&grads[1]);
            if a.is_zero() && b.is_zero() {
                return critical(&grads, 2, "all (x, y)".into());
            }
            if a.is_zero() || b.is_zero() {
                let c = if a.is_zero() { &b } else { &a };
                return if is_constant(c) {
                    (Verdict::NonCritical, None)
                } else {
                    critical(&grads, 2, format!("{c} = 0"))
                };
            }
            if is_constant(&a) || is_constant(&b) {
                return (Verdict::NonCritical, None);
            }
            let (ya, yb) = (as_y_poly(&a), as_y_poly(&b));
            let h = match (ya.len() > 1, yb.len() > 1) {
                (true, true) => {
                    let r = resultant_y(&ya, &yb);
                    if r.is_zero() {
                        return critical(&grads, 2, format!("common factor of {a} and {b}"));
                    }
                    r
                }
                (false, _) => x_poly(&a),
                (_, false) => x_poly(&b),
            };
            let h = h.strip_t_power().squarefree();
            if h.is_constant() {
                return (Verdict::NonCritical, None);
            }
            for (hi, g) in dynamic_gcd(h, ya, yb) {
                let has_torus_root = g.is_empty() || (g.len() > 1 && g[..g.len() - 1].iter().any(|c| !c.is_zero()));
                if has_torus_root {
                    let locus = format!("{} = 0, {} = 0", hi.display_with("x"), y_poly_string(&g));
                    return critical(&grads, 2, locus);
                }
            }
            (Verdict::NonCritical, None)
        }
    }
}

/// Convenience: `true` iff the characteristic-0 verdict (or heuristic for
/// `n ≥ 3`) is non-critical.
pub fn is_newton_noncritical(f: &Polynomial) -> Result<bool, NewtonError> {
    Ok(check_noncritical(f, Mode::ExactSmall, &NonCritParams::default())?.verdict == Verdict::NonCritical)
}
