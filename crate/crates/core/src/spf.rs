//! Igusa's stationary phase formula on residue domains.
//!
//! For `D` the preimage of `D̄ ⊆ F_p^n`,
//!
//! ```text
//! ∫_D |f|^s = ν + σ (1 - q^{-1}) t / (1 - q^{-1} t)
//!           + Σ_{P ∈ S(f,D)} q^{-n} t^{e_P} ∫_{O^n} |f_P|^s
//! ```
//!
//! with `t = q^{-s}`. Applied recursively it evaluates the integral exactly
//! whenever every chain of singular lifts terminates.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::mpoly::{MpolyError, Polynomial};
use crate::numeric::{p_valuation, PrimeSpec, Rational, Valuation};
use crate::ratfun::RationalZeta;
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpfError {
    #[error("point has {got} coordinates, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("{0} is undefined: the point is {1}")]
    Undefined(&'static str, &'static str),
    #[error("supremum not certified within depth {depth}; open class {class:?} modulo p^{depth}")]
    Uncertified { depth: u32, class: Vec<BigInt> },
    #[error("recursion exceeded depth {guard} along lifts {path:?}")]
    DepthExceeded { guard: usize, path: Vec<Vec<u64>> },
    #[error("polynomial vanishes identically")]
    ZeroPolynomial,
    #[error(transparent)]
    Poly(#[from] MpolyError),
}

/// Residue classes `D̄ ⊆ F_p^n` whose preimage is the domain `D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueDomain {
    dim: usize,
    residues: BTreeSet<Vec<u64>>,
}

fn all_points(n: usize, p: u64, lo: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

impl ResidueDomain {
    /// `D = O^n`.
    pub fn full(n: usize, p: PrimeSpec) -> Self {
        ResidueDomain { dim: n, residues: all_points(n, p.get(), 0).into_iter().collect() }
    }

    /// `D = (O^×)^n`.
    pub fn unit_torus(n: usize, p: PrimeSpec) -> Self {
        ResidueDomain { dim: n, residues: all_points(n, p.get(), 1).into_iter().collect() }
    }

    pub fn from_points(n: usize, points: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let residues: BTreeSet<Vec<u64>> = points.into_iter().collect();
        assert!(residues.iter().all(|r| r.len() == n));
        ResidueDomain { dim: n, residues }
    }

    pub fn empty(n: usize) -> Self {
        ResidueDomain { dim: n, residues: BTreeSet::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn residues(&self) -> &BTreeSet<Vec<u64>> {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SPFCounts {
    #[serde(serialize_with = "crate::numeric::serialize_rational")]
    pub nu: Rational,
    #[serde(serialize_with = "crate::numeric::serialize_rational")]
    pub sigma: Rational,
    /// Lifts in `{0, …, p-1}^n` of the singular points of `f̄` in `D̄`.
    pub singular: Vec<Vec<u64>>,
}

fn check_dim(f: &Polynomial, n: usize) -> Result<(), SpfError> {
    if f.nvars() != n {
        return Err(SpfError::ArityMismatch { expected: f.nvars(), got: n });
    }
    Ok(())
}

/// Classify `D̄` into points with `f̄ ≠ 0`, smooth zeros and singular zeros.
pub fn spf_counts(f: &Polynomial, d: &ResidueDomain, p: PrimeSpec) -> Result<SPFCounts, SpfError> {
    check_dim(f, d.dim)?;
    let fb = f.reduce_mod_p(p);
    let grads = fb.partials();
    let (mut nonzero, mut smooth) = (0u64, 0u64);
    let mut singular = Vec::new();
    for pt in &d.residues {
        if fb.eval(pt) != 0 {
            nonzero += 1;
        } else if grads.iter().any(|g| g.eval(pt) != 0) {
            smooth += 1;
        } else {
            singular.push(pt.clone());
        }
    }
    let scale = p.inv_pow(d.dim as u64);
    Ok(SPFCounts {
        nu: &scale * Rational::from_integer(nonzero.into()),
        sigma: &scale * Rational::from_integer(smooth.into()),
        singular,
    })
}

fn point_values(f: &Polynomial, pt: &[BigInt], with_f: bool) -> Result<Vec<BigInt>, SpfError> {
    let mut vals = Vec::new();
    if with_f {
        vals.push(f.evaluate(pt)?);
    }
    for g in f.partials() {
        vals.push(g.evaluate(pt)?);
    }
    Ok(vals)
}

/// `L(f, P) = min(v(f(P)), v(∂_i f(P)))`; undefined at singular points.
pub fn l_at(f: &Polynomial, point: &[BigInt], p: PrimeSpec) -> Result<u64, SpfError> {
    point_values(f, point, true)?
        .iter()
        .map(|x| p_valuation(x, p))
        .min()
        .and_then(Valuation::finite)
        .ok_or(SpfError::Undefined("L", "a singular point"))
}

/// `ℓ(f, P) = min v(∂_i f(P))`; undefined at critical points.
pub fn ell_at(f: &Polynomial, point: &[BigInt], p: PrimeSpec) -> Result<u64, SpfError> {
    point_values(f, point, false)?
        .iter()
        .map(|x| p_valuation(x, p))
        .min()
        .and_then(Valuation::finite)
        .ok_or(SpfError::Undefined("ell", "a critical point"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SupMode {
    /// `C(f, D) = sup L(f, P)`.
    L,
    /// `c(f, D) = sup ℓ(f, P)`.
    Ell,
}

/// Supremum of `L` or `ℓ` over `D`, certified by a residue tree.
///
/// A class `r mod p^j` closes once some relevant value has valuation below
/// `j` at `r`; the minimum is then constant on the class. Open classes are
/// refined until `max_depth`.
pub fn sup_bound(
    f: &Polynomial,
    d: &ResidueDomain,
    p: PrimeSpec,
    mode: SupMode,
    max_depth: u32,
) -> Result<u64, SpfError> {
    check_dim(f, d.dim)?;
    let n = d.dim;
    let mut funcs: Vec<Polynomial> = Vec::new();
    if mode == SupMode::L {
        funcs.push(f.clone());
    }
    funcs.extend(f.partials());
    let pb = p.to_bigint();
    let mut best = 0u64;
    let mut frontier: Vec<Vec<BigInt>> =
        d.residues.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut modulus = pb.clone();
    for j in 1..=max_depth {
        let mut next = Vec::new();
        for r in frontier {
            let mut closed: Option<u64> = None;
            for h in &funcs {
                if let Valuation::Finite(k) = p_valuation(&h.evaluate(&r)?, p) {
                    if k < j as u64 {
                        closed = Some(closed.map_or(k, |c| c.min(k)));
                    }
                }
            }
            match closed {
                Some(k) => best = best.max(k),
                None if j == max_depth => {
                    return Err(SpfError::Uncertified { depth: max_depth, class: r });
                }
                None => {
                    for digits in all_points(n, p.get(), 0) {
                        next.push(
                            r.iter().zip(&digits).map(|(x, &dg)| x + &modulus * BigInt::from(dg)).collect(),
                        );
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(best);
        }
        frontier = next;
        modulus *= &pb;
    }
    Ok(best)
}

/// One node of the recursive evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SPFTrace {
    /// Lifts `P_1, …, P_k` leading to this node.
    pub path: Vec<Vec<u64>>,
    /// `e_{P_1..P_k}(f)`.
    pub e: u64,
    /// `E_{P_1..P_k}(f)`, the running sum of orders.
    #[serde(rename = "E")]
    pub cumulative: u64,
    pub polynomial: Polynomial,
    pub counts: SPFCounts,
    /// The subtree equals one evaluated earlier.
    pub memoized: bool,
    pub children: Vec<SPFTrace>,
}

impl SPFTrace {
    /// Longest chain of lifts below the root.
    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| 1 + c.depth()).max().unwrap_or(0)
    }
}

struct Evaluator {
    p: PrimeSpec,
    guard: usize,
    memo: HashMap<Polynomial, UPoly>,
}

impl Evaluator {
    /// Numerator `N` with `∫_D |f|^s = N(t) / (1 - q^{-1} t)`.
    fn numerator(
        &mut self,
        f: &Polynomial,
        d: &ResidueDomain,
        path: Vec<Vec<u64>>,
        e: u64,
        cumulative: u64,
    ) -> Result<(UPoly, SPFTrace), SpfError> {
        if path.len() > self.guard {
            return Err(SpfError::DepthExceeded { guard: self.guard, path });
        }
        let counts = spf_counts(f, d, self.p)?;
        let q_inv = self.p.inv_pow(1);
        let one_minus = UPoly::new(vec![Rational::one(), -q_inv.clone()]);
        let mut num = one_minus.scale(&counts.nu);
        num = &num + &UPoly::monomial(&counts.sigma * (Rational::one() - &q_inv), 1);
        let weight = self.p.inv_pow(d.dim as u64);
        let full = ResidueDomain::full(d.dim, self.p);
        let mut children = Vec::new();
        for pt in &counts.singular {
            let lift: Vec<BigInt> = pt.iter().map(|&x| BigInt::from(x)).collect();
            let r = f.shift_scale(&lift, self.p)?;
            let mut child_path = path.clone();
            child_path.push(pt.clone());
            let (child, trace) = match self.memo.get(&r.transformed) {
                Some(c) => {
                    let trace = SPFTrace {
                        path: child_path,
                        e: r.order,
                        cumulative: cumulative + r.order,
                        polynomial: r.transformed.clone(),
                        counts: spf_counts(&r.transformed, &full, self.p)?,
                        memoized: true,
                        children: Vec::new(),
                    };
                    (c.clone(), trace)
                }
                None => {
                    let (c, trace) =
                        self.numerator(&r.transformed, &full, child_path, r.order, cumulative + r.order)?;
                    self.memo.insert(r.transformed.clone(), c.clone());
                    (c, trace)
                }
            };
            num = &num + &(&UPoly::monomial(weight.clone(), r.order as usize) * &child);
            children.push(trace);
        }
        let trace =
            SPFTrace { path, e, cumulative, polynomial: f.clone(), counts, memoized: false, children };
        Ok((num, trace))
    }
}

pub const DEFAULT_DEPTH_GUARD: usize = 32;

/// `∫_D |f|^s |dx|` as `N(t) / (1 - q^{-1} t)` together with its recursion tree.
pub fn spf_evaluate(
    f: &Polynomial,
    d: &ResidueDomain,
    p: PrimeSpec,
    depth_guard: usize,
) -> Result<(RationalZeta, SPFTrace), SpfError> {
    check_dim(f, d.dim)?;
    if f.is_zero() {
        return Err(SpfError::ZeroPolynomial);
    }
    let mut ev = Evaluator { p, guard: depth_guard, memo: HashMap::new() };
    let (num, trace) = ev.numerator(f, d, Vec::new(), 0, 0)?;
    Ok((RationalZeta::new(num, vec![(1, 1)], p), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_polynomial;
    use crate::numeric::rat;
    use proptest::prelude::*;

    fn pr(p: u64) -> PrimeSpec {
        PrimeSpec::new(p).unwrap()
    }

    fn poly(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn counts_examples() {
        let c = spf_counts(&poly("x"), &ResidueDomain::full(1, pr(5)), pr(5)).unwrap();
        assert_eq!((c.nu, c.sigma, c.singular.len()), (rat(4, 5), rat(1, 5), 0));
        let c = spf_counts(&poly("x^2"), &ResidueDomain::full(1, pr(5)), pr(5)).unwrap();
        assert_eq!((c.nu, c.sigma, c.singular), (rat(4, 5), rat(0, 1), vec![vec![0]]));
        let c = spf_counts(&poly("x^2 + y^2"), &ResidueDomain::unit_torus(2, pr(3)), pr(3)).unwrap();
        assert_eq!((c.nu, c.sigma, c.singular.len()), (rat(4, 9), rat(0, 1), 0));
    }

    #[test]
    fn l_and_ell_examples() {
        assert_eq!(l_at(&poly("x^2 - 5"), &ints(&[0]), pr(5)), Ok(1));
        assert_eq!(ell_at(&poly("x"), &ints(&[0]), pr(7)), Ok(0));
        assert_eq!(l_at(&poly("x^2 + x"), &ints(&[0]), pr(5)), Ok(0));
        assert!(matches!(l_at(&poly("x^2"), &ints(&[0]), pr(5)), Err(SpfError::Undefined(..))));
        assert!(matches!(ell_at(&poly("x^2 - 5"), &ints(&[0]), pr(5)), Err(SpfError::Undefined(..))));
    }

    /// Oracle for suprema: direct minimization over all `x mod p^k`.
    fn direct_sup(f: &Polynomial, p: u64, k: u32, mode: SupMode) -> u64 {
        let m = p.pow(k);
        (0..m)
            .map(|x| {
                let pt = ints(&[x as i64]);
                let v = match mode {
                    SupMode::L => l_at(f, &pt, pr(p)),
                    SupMode::Ell => ell_at(f, &pt, pr(p)),
                };
                v.unwrap_or(u64::MAX).min(k as u64)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn sup_bound_examples() {
        let full = ResidueDomain::full(1, pr(5));
        assert_eq!(sup_bound(&poly("x"), &full, pr(5), SupMode::Ell, 4), Ok(0));
        assert!(matches!(
            sup_bound(&poly("x^2"), &full, pr(5), SupMode::Ell, 6),
            Err(SpfError::Uncertified { depth: 6, .. })
        ));
        // 2x + 1 vanishes at x = -1/2 in Z_5, so the branch x ≡ 2 never closes
        assert!(matches!(
            sup_bound(&poly("x^2 + x"), &full, pr(5), SupMode::Ell, 8),
            Err(SpfError::Uncertified { .. })
        ));
        // f = x^2 + x has no singular points: C(f, D) = 0 since f or f' is a unit
        assert_eq!(sup_bound(&poly("x^2 + x"), &full, pr(5), SupMode::L, 8), Ok(0));
        for (s, p) in [("x^2 - 5", 5), ("x^3 - 3", 3), ("x^2 + 3*x + 9", 3)] {
            let got = sup_bound(&poly(s), &ResidueDomain::full(1, pr(p)), pr(p), SupMode::L, 8).unwrap();
            assert_eq!(got, direct_sup(&poly(s), p, 5, SupMode::L), "{s}");
        }
    }

    #[test]
    fn evaluate_examples() {
        let (z, _) = spf_evaluate(&poly("x"), &ResidueDomain::full(1, pr(5)), pr(5), 32).unwrap();
        assert_eq!(z.numerator, UPoly::constant(rat(4, 5)));
        assert_eq!(z.factors, vec![(1, 1)]);
        let (z, trace) = spf_evaluate(&poly("x^2 - 5"), &ResidueDomain::full(1, pr(5)), pr(5), 32).unwrap();
        // 4/5 + t/5 over the universal factor
        let expect = &UPoly::new(vec![rat(4, 5), rat(1, 5)]) * &UPoly::new(vec![rat(1, 1), rat(-1, 5)]);
        assert_eq!(z.numerator, expect);
        assert_eq!(trace.children.len(), 1);
        assert_eq!((trace.children[0].e, trace.children[0].cumulative), (1, 1));
        assert_eq!(trace.children[0].polynomial.to_string(), "5*x^2 - 1");
        assert!(matches!(
            spf_evaluate(&poly("x^2"), &ResidueDomain::full(1, pr(5)), pr(5), 10),
            Err(SpfError::DepthExceeded { guard: 10, .. })
        ));
    }

    #[test]
    fn measure_conservation() {
        for (s, p) in [("x^2 + y^2", 5), ("x*y + x^3", 3), ("x^2 - y^3", 5)] {
            let f = poly(s);
            let d = ResidueDomain::full(2, pr(p));
            let c = spf_counts(&f, &d, pr(p)).unwrap();
            let total = &c.nu + &c.sigma + Rational::from_integer(c.singular.len().into()) * pr(p).inv_pow(2);
            assert_eq!(total, Rational::from_integer(d.len().into()) * pr(p).inv_pow(2));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn single_universal_factor(a in -6i64..7, b in -6i64..7, c in 1i64..4, pi in 0usize..2) {
            let p = [3u64, 5][pi];
            // a smooth family: c*x^2 + a*x + b*y + ... with y linear keeps it nonsingular
            let f = Polynomial::from_table(&["x", "y"], &[(&[2, 0], c), (&[1, 0], a), (&[0, 1], 1), (&[0, 0], b)]);
            let (z, _) = spf_evaluate(&f, &ResidueDomain::full(2, pr(p)), pr(p), 32).unwrap();
            prop_assert_eq!(z.factors, vec![(1, 1)]);
        }
    }
}
