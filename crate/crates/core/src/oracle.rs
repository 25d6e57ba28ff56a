//! Brute-force ground truth: solutions of `f ≡ 0 mod p^m` by breadth-first
//! lifting, optionally restricted to valuation cones `E_A`, and the measure
//! series of `Z(f; s)` derived from them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::mpoly::{Monomial, MpolyError, Polynomial};
use crate::newton::{decompose_simplicial, CellInequalities, Cone, Membership, NewtonError, NewtonPolyhedron};
use crate::numeric::{rational_string, PrimeSpec, Rational};
use crate::ratfun::{recover_numerator, reduce, PowerSeries, RationalZeta, RatfunError};
use crate::tsden::{self, TsdenError};
use crate::upoly::UPoly;

/// Default bound on the total number of surviving residue classes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("p^{0} does not fit in 64 bits")]
    ModulusOverflow(usize),
    #[error("domain has {got} coordinates, polynomial has {expected}")]
    DomainArity { expected: usize, got: usize },
    #[error("count budget of {budget} nodes exhausted after level {completed}")]
    BudgetExceeded { budget: u64, completed: usize },
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Tsden(#[from] TsdenError),
    #[error(transparent)]
    Poly(#[from] MpolyError),
    #[error(transparent)]
    Ratfun(#[from] RatfunError),
}

pub type ValuationPredicate = Arc<dyn Fn(&[u64]) -> bool + Send + Sync>;

/// Membership region for a block of valuation coordinates.
#[derive(Clone)]
pub enum Region {
    /// Disjoint union of simplicial half-open cells.
    Cells(Vec<CellInequalities>),
    /// Arbitrary predicate on (capped) valuation vectors.
    Predicate(ValuationPredicate),
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Cells(c) => f.debug_tuple("Cells").field(c).finish(),
            Region::Predicate(_) => f.write_str("Predicate"),
        }
    }
}

impl Region {
    fn classify(&self, lo: &[u64], hi: &[Option<u64>]) -> Membership {
        match self {
            Region::Cells(cells) => {
                let mut all_out = true;
                for c in cells {
                    match c.classify(lo, hi) {
                        Membership::Inside => return Membership::Inside,
                        Membership::Undecided => all_out = false,
                        Membership::Outside => {}
                    }
                }
                if all_out {
                    Membership::Outside
                } else {
                    Membership::Undecided
                }
            }
            Region::Predicate(pred) => {
                if hi.iter().all(Option::is_some) {
                    if pred(lo) {
                        Membership::Inside
                    } else {
                        Membership::Outside
                    }
                } else {
                    Membership::Undecided
                }
            }
        }
    }

    fn contains(&self, v: &[u64]) -> bool {
        match self {
            Region::Cells(cells) => cells.iter().any(|c| c.contains(v)),
            Region::Predicate(pred) => pred(v),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DomainBlock {
    pub coords: Vec<usize>,
    pub region: Region,
}

/// `A ⊆ N^n` as a product of regions over disjoint coordinate blocks; its
/// preimage `E_A` is `{x : (v(x_1), …, v(x_n)) ∈ A}`.
///
/// Valuations not resolved at a given level are refined lazily up to the
/// count depth, which acts as the cap for `v(0)`.
#[derive(Debug, Clone)]
pub struct ConeDomainSpec {
    n: usize,
    blocks: Vec<DomainBlock>,
}

impl ConeDomainSpec {
    /// `A = N^n`.
    pub fn full(n: usize) -> Self {
        ConeDomainSpec { n, blocks: Vec::new() }
    }

    /// `A = C ∩ N^n` for a cone, decomposed into simplicial cells.
    pub fn cone(cone: &Cone) -> Result<Self, OracleError> {
        let n = cone.ambient();
        Self::product(n, vec![((0..n).collect(), cone.clone())])
    }

    /// `A = ∏ C_k` with `C_k` acting on the coordinates `coords_k`.
    pub fn product(n: usize, blocks: Vec<(Vec<usize>, Cone)>) -> Result<Self, OracleError> {
        let mut out = Vec::new();
        for (coords, cone) in blocks {
            if coords.len() != cone.ambient() || coords.iter().any(|&i| i >= n) {
                return Err(OracleError::DomainArity { expected: n, got: cone.ambient() });
            }
            let cells = decompose_simplicial(&cone)?
                .iter()
                .map(Cone::inequalities)
                .collect::<Result<Vec<_>, _>>()?;
            out.push(DomainBlock { coords, region: Region::Cells(cells) });
        }
        Ok(ConeDomainSpec { n, blocks: out })
    }

    pub fn predicate(n: usize, pred: impl Fn(&[u64]) -> bool + Send + Sync + 'static) -> Self {
        ConeDomainSpec { n, blocks: vec![DomainBlock { coords: (0..n).collect(), region: Region::Predicate(Arc::new(pred)) }] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[DomainBlock] {
        &self.blocks
    }

    /// Membership of a fully known valuation vector.
    pub fn contains(&self, v: &[u64]) -> bool {
        self.blocks.iter().all(|b| {
            let sub: Vec<u64> = b.coords.iter().map(|&i| v[i]).collect();
            b.region.contains(&sub)
        })
    }

    /// Probability that `v(x) ∈ A` for `x` uniform in a class modulo `p^m`
    /// whose coordinates have valuation `known[i]`, or at least `m` where
    /// `known[i]` is `None`. Unknown valuations are resolved up to `cap`.
    fn weight(&self, known: &[Option<u32>], m: u64, cap: u64, p: PrimeSpec) -> Rational {
        let mut w = Rational::one();
        for b in &self.blocks {
            w *= block_weight(b, known, m, cap, p);
            if w.is_zero() {
                break;
            }
        }
        w
    }
}

/// Distribution of `min(v(x), cap)` for `x` uniform with `v(x) ≥ m`.
fn capped_law(m: u64, cap: u64, p: PrimeSpec) -> Vec<(u64, Rational)> {
    let keep = Rational::one() - p.inv_pow(1);
    let mut out: Vec<(u64, Rational)> = (m..cap).map(|j| (j, &keep * p.inv_pow(j - m))).collect();
    out.push((cap.max(m), p.inv_pow(cap.saturating_sub(m))));
    out
}

fn block_weight(b: &DomainBlock, known: &[Option<u32>], m: u64, cap: u64, p: PrimeSpec) -> Rational {
    let lo: Vec<u64> = b.coords.iter().map(|&i| known[i].map_or(m, u64::from)).collect();
    let hi: Vec<Option<u64>> = b.coords.iter().map(|&i| known[i].map(u64::from)).collect();
    match b.region.classify(&lo, &hi) {
        Membership::Inside => return Rational::one(),
        Membership::Outside => return Rational::zero(),
        Membership::Undecided => {}
    }
    let law = capped_law(m, cap, p);
    let free: Vec<usize> = (0..b.coords.len()).filter(|&k| hi[k].is_none()).collect();
    let mut total = Rational::zero();
    let mut v = lo.clone();
    let mut idx = vec![0usize; free.len()];
    loop {
        let mut prob = Rational::one();
        for (slot, &k) in free.iter().enumerate() {
            let (val, ref pr) = law[idx[slot]];
            v[k] = val;
            prob *= pr;
        }
        if b.region.contains(&v) {
            total += prob;
        }
        let mut slot = 0;
        while slot < free.len() {
            idx[slot] += 1;
            if idx[slot] < law.len() {
                break;
            }
            idx[slot] = 0;
            slot += 1;
        }
        if slot == free.len() {
            break;
        }
    }
    total
}

/// `N_m = #{x mod p^m : f(x) ≡ 0 mod p^m}` for `m = 1..=depth`, or its
/// measure-weighted analogue `p^{mn} vol{x ∈ E_A : f(x) ≡ 0 mod p^m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountSeries {
    pub f: Polynomial,
    pub p: PrimeSpec,
    pub n: usize,
    /// Requested depth.
    pub depth: usize,
    /// `N_0`: `1`, or `vol(E_A)` for a restricted count.
    #[serde(serialize_with = "crate::numeric::serialize_rational")]
    pub level0: Rational,
    /// `N_1, N_2, …`, complete unless `truncated`.
    #[serde(serialize_with = "crate::numeric::serialize_rationals")]
    pub counts: Vec<Rational>,
    /// The budget ran out before `depth` was reached.
    pub truncated: bool,
    /// Surviving residue classes over all levels.
    pub nodes: u64,
    /// Candidate lifts tested.
    pub tested: u64,
}

impl CountSeries {
    /// `N_m` for `0 ≤ m ≤ levels()`.
    pub fn count(&self, m: usize) -> &Rational {
        if m == 0 {
            &self.level0
        } else {
            &self.counts[m - 1]
        }
    }

    pub fn levels(&self) -> usize {
        self.counts.len()
    }

    /// Integer counts of an unrestricted series.
    pub fn integer_counts(&self) -> Option<Vec<BigInt>> {
        self.counts.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// `N_{m+1} ≤ p^n N_m` and nonnegative measure coefficients.
    pub fn is_sane(&self) -> bool {
        let pn = Rational::from_integer(self.p.pow(self.n as u32));
        let nested = (0..self.levels()).all(|m| self.count(m + 1) <= &(&pn * self.count(m)));
        nested && measure_series(self).coeffs.iter().all(|c| !c.is_negative())
    }
}

/// `f` with coefficients reduced modulo a fixed power of `p`.
struct ModPoly {
    terms: Vec<(u64, Vec<u32>)>,
}

fn pow_mod(mut b: u128, mut e: u32, m: u128) -> u128 {
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

impl ModPoly {
    fn new(f: &Polynomial, modulus: u64) -> Self {
        let mb = BigInt::from(modulus);
        let terms = f
            .terms()
            .iter()
            .map(|(Monomial(e), c)| {
                let r = ((c % &mb) + &mb) % &mb;
                (r.to_u64().expect("reduced below modulus"), e.clone())
            })
            .collect();
        ModPoly { terms }
    }

    fn eval(&self, x: &[u64], modulus: u64) -> u64 {
        let m = modulus as u128;
        let mut acc = 0u128;
        for (c, e) in &self.terms {
            let mut t = *c as u128 % m;
            for (&xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    t = t * pow_mod(xi as u128, ei, m) % m;
                }
            }
            acc = (acc + t) % m;
        }
        acc as u64
    }
}

fn valuation_key(x: &[u64], p: u64) -> Vec<Option<u32>> {
    x.iter()
        .map(|&xi| {
            if xi == 0 {
                return None;
            }
            let (mut v, mut y) = (0u32, xi);
            while y % p == 0 {
                y /= p;
                v += 1;
            }
            Some(v)
        })
        .collect()
}

type Histogram = HashMap<Vec<Option<u32>>, u64>;

struct Lifted {
    /// Per level `m = 1..`, the survivor count and, if requested, the
    /// histogram of valuation keys modulo `p^m`.
    levels: Vec<(u64, Histogram)>,
    truncated: bool,
    nodes: u64,
    tested: u64,
}

/// Breadth-first lifting: survivors modulo `p^m` expand to `p^n` children
/// modulo `p^{m+1}`; those with `f ≡ 0` survive. Survivors are stored packed,
/// `n` words per point. The budget bounds the total number of survivors; a
/// level that would exceed it is dropped and the series marked truncated.
fn lift(f: &Polynomial, p: PrimeSpec, depth: usize, budget: u64, keys: bool) -> Result<Lifted, OracleError> {
    if depth == 0 {
        return Err(OracleError::ZeroDepth);
    }
    let pu = p.get();
    let top = pu.checked_pow(depth as u32 + 1).ok_or(OracleError::ModulusOverflow(depth + 1))?;
    let n = f.nvars();
    let children = pu.checked_pow(n as u32).ok_or(OracleError::ModulusOverflow(n))?;
    let mp = ModPoly::new(f, top);
    if n == 0 {
        let c = mp.eval(&[], top);
        let levels = (1..=depth as u32).map(|m| (u64::from(c.is_multiple_of(pu.pow(m))), Histogram::new())).collect();
        return Ok(Lifted { levels, truncated: false, nodes: 0, tested: depth as u64 });
    }
    let mut survivors: Vec<u64> = vec![0; n];
    let mut count: u64 = 1;
    let mut step: u64 = 1;
    let mut nodes = 0u64;
    let mut tested = 0u64;
    let mut levels = Vec::new();
    for m in 1..=depth {
        tested = tested.saturating_add(count.saturating_mul(children));
        let modulus = step * pu;
        let keep = m < depth;
        let parts: Vec<(Vec<u64>, u64, Histogram)> = survivors
            .par_chunks(CHUNK * n)
            .map(|chunk| {
                let mut next = Vec::new();
                let mut found = 0u64;
                let mut hist = Histogram::new();
                let mut child = vec![0u64; n];
                for x in chunk.chunks(n) {
                    for mut d in 0..children {
                        for (c, &xi) in child.iter_mut().zip(x) {
                            *c = xi + step * (d % pu);
                            d /= pu;
                        }
                        if mp.eval(&child, modulus) == 0 {
                            found += 1;
                            if keep {
                                next.extend_from_slice(&child);
                            }
                            if keys {
                                *hist.entry(valuation_key(&child, pu)).or_insert(0) += 1;
                            }
                        }
                    }
                }
                (next, found, hist)
            })
            .collect();
        let mut next = Vec::new();
        let mut hist = Histogram::new();
        count = 0;
        for (s, c, h) in parts {
            next.extend(s);
            count += c;
            for (k, v) in h {
                *hist.entry(k).or_insert(0) += v;
            }
        }
        if nodes.saturating_add(count) > budget {
            return Ok(Lifted { levels, truncated: true, nodes, tested });
        }
        nodes += count;
        levels.push((count, hist));
        survivors = next;
        step = modulus;
        if count == 0 {
            for _ in m..depth {
                levels.push((0, Histogram::new()));
            }
            break;
        }
    }
    Ok(Lifted { levels, truncated: false, nodes, tested })
}

fn unrestricted_series(f: &Polynomial, p: PrimeSpec, depth: usize, lifted: &Lifted) -> CountSeries {
    CountSeries {
        f: f.clone(),
        p,
        n: f.nvars(),
        depth,
        level0: Rational::one(),
        counts: lifted.levels.iter().map(|(c, _)| Rational::from_integer((*c).into())).collect(),
        truncated: lifted.truncated,
        nodes: lifted.nodes,
        tested: lifted.tested,
    }
}

fn restricted_series(
    f: &Polynomial,
    p: PrimeSpec,
    depth: usize,
    lifted: &Lifted,
    domain: &ConeDomainSpec,
) -> CountSeries {
    let n = f.nvars();
    let cap = depth as u64;
    let level0 = domain.weight(&vec![None; n], 0, cap, p);
    let counts = lifted
        .levels
        .iter()
        .enumerate()
        .map(|(i, (_, hist))| {
            let m = i as u64 + 1;
            hist.iter().fold(Rational::zero(), |acc, (key, &c)| {
                acc + domain.weight(key, m, cap, p) * Rational::from_integer(c.into())
            })
        })
        .collect();
    CountSeries {
        f: f.clone(),
        p,
        n,
        depth,
        level0,
        counts,
        truncated: lifted.truncated,
        nodes: lifted.nodes,
        tested: lifted.tested,
    }
}

/// Counts `N_1..N_depth`, restricted to `E_A` when a domain is given.
pub fn count_mod(
    f: &Polynomial,
    p: PrimeSpec,
    depth: usize,
    domain: Option<&ConeDomainSpec>,
    budget: u64,
) -> Result<CountSeries, OracleError> {
    if let Some(d) = domain {
        if d.dim() != f.nvars() {
            return Err(OracleError::DomainArity { expected: f.nvars(), got: d.dim() });
        }
    }
    let lifted = lift(f, p, depth, budget, domain.is_some())?;
    Ok(match domain {
        Some(d) => restricted_series(f, p, depth, &lifted, d),
        None => unrestricted_series(f, p, depth, &lifted),
    })
}

/// The unrestricted counts together with counts restricted to each domain,
/// from a single lifting pass.
pub fn count_mod_domains(
    f: &Polynomial,
    p: PrimeSpec,
    depth: usize,
    domains: &[ConeDomainSpec],
    budget: u64,
) -> Result<(CountSeries, Vec<CountSeries>), OracleError> {
    if let Some(d) = domains.iter().find(|d| d.dim() != f.nvars()) {
        return Err(OracleError::DomainArity { expected: f.nvars(), got: d.dim() });
    }
    let lifted = lift(f, p, depth, budget, true)?;
    let restricted = domains.iter().map(|d| restricted_series(f, p, depth, &lifted, d)).collect();
    Ok((unrestricted_series(f, p, depth, &lifted), restricted))
}

/// Coefficient of `t^m` is `N_m q^{-mn} - N_{m+1} q^{-(m+1)n}`, the volume of
/// `{x ∈ E_A : v(f(x)) = m}`; known for `m < levels()`.
pub fn measure_series(counts: &CountSeries) -> PowerSeries {
    let n = counts.n as u64;
    let coeffs = (0..counts.levels())
        .map(|m| {
            counts.count(m) * counts.p.inv_pow(m as u64 * n)
                - counts.count(m + 1) * counts.p.inv_pow((m as u64 + 1) * n)
        })
        .collect();
    PowerSeries::new(coeffs)
}

/// `depth = Σ t_powers + max_deg + 2`, leaving two residual coefficients.
pub fn default_depth(factors: &[(u64, u64)], max_deg: usize) -> usize {
    factors.iter().map(|&(_, b)| b as usize).sum::<usize>() + max_deg + 2
}

/// Outcome of testing the claimed denominator against the counted series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub success: bool,
    pub p: PrimeSpec,
    pub depth: usize,
    pub max_deg: usize,
    pub counts: CountSeries,
    pub series: PowerSeries,
    /// `(q_power, t_power)` of every factor, the universal one first.
    pub factors: Vec<(u64, u64)>,
    pub numerator: Option<UPoly>,
    /// Coefficients of `series · denominator` above `max_deg`.
    pub residuals: Vec<Rational>,
    pub candidate_poles: Vec<String>,
    pub poles_surviving: Vec<String>,
    pub poles_cancelled: Vec<String>,
    pub message: Option<String>,
}

impl VerifyReport {
    pub fn to_json(&self) -> serde_json::Value {
        let counts: Vec<serde_json::Value> = match self.counts.integer_counts() {
            Some(c) => c.iter().map(|x| serde_json::json!(x.to_string().parse::<u64>().ok())).collect(),
            None => self.counts.counts.iter().map(|c| serde_json::json!(rational_string(c))).collect(),
        };
        let factors: Vec<serde_json::Value> =
            self.factors.iter().map(|&(a, b)| serde_json::json!({ "qpow": a, "tpow": b })).collect();
        let mut j = serde_json::json!({
            "ok": self.success,
            "p": self.p.get(),
            "depth": self.depth,
            "max_deg": self.max_deg,
            "counts": counts,
            "series": self.series.strings(),
            "factors": factors,
            "numerator": self.numerator.as_ref().map(|u| u.to_string()),
            "residuals": self.residuals.iter().map(rational_string).collect::<Vec<_>>(),
            "poles_candidate": self.candidate_poles,
            "poles_surviving": self.poles_surviving,
            "poles_cancelled": self.poles_cancelled,
            "nodes": self.counts.nodes,
            "tested": self.counts.tested,
        });
        if let Some(m) = &self.message {
            j["message"] = serde_json::Value::String(m.clone());
        }
        j
    }
}

/// Count `f ⊕ g`, then test whether its measure series times the claimed
/// denominator is a polynomial of degree at most `max_deg`.
pub fn verify_theorem(
    f: &Polynomial,
    g: &Polynomial,
    p: PrimeSpec,
    depth: usize,
    max_deg: usize,
    budget: u64,
) -> Result<VerifyReport, OracleError> {
    let den = tsden::denominator(f, g)?;
    let factors: Vec<(u64, u64)> = den.factor_powers().iter().map(|&(a, b)| (a as u64, b as u64)).collect();
    let h = Polynomial::thom_sebastiani(f, g)?;
    let counts = count_mod(&h, p, depth, None, budget)?;
    if counts.truncated {
        return Err(OracleError::BudgetExceeded { budget, completed: counts.levels() });
    }
    let series = measure_series(&counts);
    let prod = series.mul_poly(&crate::ratfun::denominator_poly(&factors, p));
    let residuals: Vec<Rational> = prod.coeffs.iter().skip(max_deg + 1).cloned().collect();
    let mut report = VerifyReport {
        success: false,
        p,
        depth,
        max_deg,
        counts,
        series: series.clone(),
        factors: factors.clone(),
        numerator: None,
        residuals,
        candidate_poles: den.candidate_poles().strings(),
        poles_surviving: Vec::new(),
        poles_cancelled: Vec::new(),
        message: den.warning.clone(),
    };
    match recover_numerator(&series, &factors, p, max_deg) {
        Ok(num) => {
            let red = reduce(&RationalZeta::new(num.clone(), factors, p));
            report.success = true;
            report.numerator = Some(num);
            report.poles_surviving = red.surviving_strings();
            report.poles_cancelled = red.cancelled_poles.iter().map(rational_string).collect();
        }
        Err(RatfunError::Mismatch { first, .. }) => {
            report.message = Some(format!("falsification candidate: nonzero residual at t^{first}"));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

/// Restricted counts over a partition of `N^{n+m}` compared with the
/// unrestricted count, level by level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub cells: usize,
    pub unrestricted: Vec<Rational>,
    pub summed: Vec<Rational>,
    pub ok: bool,
}

/// The cells `C_f × C_g`, with `C_f` and `C_g` ranging over the zero cone and
/// the simplicial subdivisions of the cones `Δ_τ` of the two polyhedra.
pub fn product_cells(pf: &NewtonPolyhedron, pg: &NewtonPolyhedron) -> Result<Vec<ConeDomainSpec>, OracleError> {
    let (nf, ng) = (pf.ambient_dim(), pg.ambient_dim());
    let mut out = Vec::new();
    for cf in pf.orthant_partition()? {
        for cg in pg.orthant_partition()? {
            out.push(ConeDomainSpec::product(
                nf + ng,
                vec![((0..nf).collect(), cf.clone()), ((nf..nf + ng).collect(), cg)],
            )?);
        }
    }
    Ok(out)
}

/// Check that counts of `f ⊕ g` restricted to [`product_cells`] add up to
/// the unrestricted counts at every level and at level 0.
pub fn partition_check(
    f: &Polynomial,
    g: &Polynomial,
    p: PrimeSpec,
    depth: usize,
    budget: u64,
) -> Result<PartitionReport, OracleError> {
    let (pf, pg) = (NewtonPolyhedron::build(f)?, NewtonPolyhedron::build(g)?);
    let cells = product_cells(&pf, &pg)?;
    let h = Polynomial::thom_sebastiani(f, g)?;
    let (total, parts) = count_mod_domains(&h, p, depth, &cells, budget)?;
    if total.truncated {
        return Err(OracleError::BudgetExceeded { budget, completed: total.levels() });
    }
    let unrestricted: Vec<Rational> = (0..=total.levels()).map(|m| total.count(m).clone()).collect();
    let summed: Vec<Rational> = (0..=total.levels())
        .map(|m| parts.iter().fold(Rational::zero(), |acc, s| acc + s.count(m)))
        .collect();
    Ok(PartitionReport { cells: cells.len(), ok: unrestricted == summed, unrestricted, summed })
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

    fn ints(c: &CountSeries) -> Vec<u64> {
        c.integer_counts().unwrap().iter().map(|x| x.to_u64().unwrap()).collect()
    }

    /// Direct enumeration of all residues modulo `p^m`.
    fn naive_count(f: &Polynomial, p: u64, m: u32) -> u64 {
        let pm = p.pow(m);
        let n = f.nvars();
        let mut count = 0;
        for idx in 0..pm.pow(n as u32) {
            let mut r = idx;
            let pt: Vec<BigInt> = (0..n)
                .map(|_| {
                    let x = r % pm;
                    r /= pm;
                    BigInt::from(x)
                })
                .collect();
            if (f.evaluate(&pt).unwrap() % BigInt::from(pm)).is_zero() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn count_examples() {
        assert_eq!(ints(&count_mod(&poly("x"), pr(5), 2, None, DEFAULT_BUDGET).unwrap()), vec![1, 1]);
        let x2 = count_mod(&poly("x^2"), pr(5), 3, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(ints(&x2), vec![1, 5, naive_count(&poly("x^2"), 5, 3)]);
        assert_eq!(ints(&x2), vec![1, 5, 5]);
        assert_eq!(ints(&count_mod(&poly("x^2 + y^2"), pr(5), 1, None, DEFAULT_BUDGET).unwrap()), vec![9]);
        for (s, p, m) in [("x^2 + y^3", 3, 3), ("x*y - 3", 3, 3), ("x^3 + 2*y*z", 2, 3), ("x^2 + y^2", 5, 2)] {
            let c = count_mod(&poly(s), pr(p), m as usize, None, DEFAULT_BUDGET).unwrap();
            let expect: Vec<u64> = (1..=m).map(|k| naive_count(&poly(s), p, k)).collect();
            assert_eq!(ints(&c), expect, "{s}");
        }
    }

    #[test]
    fn series_examples() {
        let s = measure_series(&count_mod(&poly("x"), pr(5), 4, None, DEFAULT_BUDGET).unwrap());
        assert_eq!(s.coeffs, vec![rat(4, 5), rat(4, 25), rat(4, 125), rat(4, 625)]);
        let one = Polynomial::constant(vec!["x".into()], 1);
        let s = measure_series(&count_mod(&one, pr(5), 3, None, DEFAULT_BUDGET).unwrap());
        assert_eq!(s.coeffs, vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        let s = measure_series(&count_mod(&poly("x^2"), pr(5), 3, None, DEFAULT_BUDGET).unwrap());
        assert_eq!(s.coeffs, vec![rat(4, 5), rat(0, 1), rat(4, 25)]);
    }

    #[test]
    fn budget_truncates() {
        let c = count_mod(&poly("x + y"), pr(5), 6, None, 200).unwrap();
        assert!(c.truncated);
        assert_eq!(ints(&c), vec![5, 25, 125]);
        assert_eq!((c.nodes, c.tested), (155, 25 + 125 + 625 + 3125));
    }

    #[test]
    fn modulus_overflow() {
        assert!(matches!(count_mod(&poly("x"), pr(3), 60, None, 10), Err(OracleError::ModulusOverflow(_))));
    }

    #[test]
    fn restricted_counts() {
        let f = poly("x^2 + y^3");
        let torus = ConeDomainSpec::cone(&Cone::zero(2)).unwrap();
        let c = count_mod(&f, pr(5), 3, Some(&torus), DEFAULT_BUDGET).unwrap();
        // units with x^2 ≡ -y^3: y ≡ -u^2, x ≡ u^3 for u ∈ F_5^×, lifting smoothly
        assert_eq!(c.level0, rat(16, 25));
        assert_eq!(c.counts[0], rat(4, 1));
        assert_eq!(c.counts[1], rat(20, 1));
        let pred = ConeDomainSpec::predicate(2, |v| v[0] == 0 && v[1] == 0);
        assert_eq!(count_mod(&f, pr(5), 3, Some(&pred), DEFAULT_BUDGET).unwrap(), c);
    }

    #[test]
    fn capped_law_sums_to_one() {
        for (m, cap) in [(0, 0), (0, 4), (2, 5), (3, 3)] {
            let total: Rational = capped_law(m, cap, pr(3)).into_iter().map(|(_, w)| w).sum();
            assert_eq!(total, Rational::one());
        }
    }

    #[test]
    fn cusp_partition() {
        let r = partition_check(&poly("x^2"), &poly("y^3"), pr(3), 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.cells, 4);
        assert!(r.ok, "{:?} vs {:?}", r.unrestricted, r.summed);
    }

    #[test]
    fn two_dimensional_partition() {
        let f = poly("x^2 + y^3");
        let pf = NewtonPolyhedron::build(&f).unwrap();
        let cells: Vec<ConeDomainSpec> =
            pf.orthant_partition().unwrap().iter().map(|c| ConeDomainSpec::cone(c).unwrap()).collect();
        let (total, parts) = count_mod_domains(&poly("x*y + x^3"), pr(3), 4, &cells, DEFAULT_BUDGET).unwrap();
        for m in 0..=4 {
            let sum = parts.iter().fold(Rational::zero(), |a, s| a + s.count(m));
            assert_eq!(&sum, total.count(m), "level {m}");
        }
    }

    #[test]
    fn verify_small() {
        let r = verify_theorem(&poly("x"), &poly("y"), pr(3), 8, 3, DEFAULT_BUDGET).unwrap();
        assert!(r.success);
        assert!(r.residuals.iter().all(Zero::is_zero));
        let r = verify_theorem(&poly("x^2"), &poly("y^2"), pr(5), 8, 4, DEFAULT_BUDGET).unwrap();
        assert!(r.success);
        assert!(r.poles_surviving.iter().all(|s| s == "-1"));
    }

    #[test]
    fn verify_rejects_wrong_degree() {
        let r = verify_theorem(&poly("x^2"), &poly("y^2"), pr(5), 6, 0, DEFAULT_BUDGET).unwrap();
        assert!(!r.success);
        assert!(r.message.unwrap().contains("falsification"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn sanity_and_unit_scaling(
            coeffs in proptest::collection::vec(-4i64..5, 4),
            u in 1i64..7,
            pi in 0usize..2,
        ) {
            let p = [3u64, 5][pi];
            prop_assume!(coeffs.iter().any(|&c| c != 0) && !(u as u64).is_multiple_of(p));
            let table: Vec<(&[u32], i64)> =
                vec![(&[2, 0], coeffs[0]), (&[0, 2], coeffs[1]), (&[1, 1], coeffs[2]), (&[3, 0], coeffs[3])];
            let f = Polynomial::from_table(&["x", "y"], &table);
            let c = count_mod(&f, pr(p), 3, None, DEFAULT_BUDGET).unwrap();
            prop_assert!(c.is_sane());
            let scaled = count_mod(&f.scale(&BigInt::from(u)), pr(p), 3, None, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(&c.counts, &scaled.counts);
        }

        #[test]
        fn level_one_convolution(a in -3i64..4, b in -3i64..4, c in 1i64..4) {
            let p = 5u64;
            let f = Polynomial::from_table(&["x"], &[(&[2], c), (&[1], a)]);
            let g = Polynomial::from_table(&["y"], &[(&[3], 1), (&[0], b)]);
            let h = Polynomial::thom_sebastiani(&f, &g).unwrap();
            let n1 = ints(&count_mod(&h, pr(p), 1, None, DEFAULT_BUDGET).unwrap())[0];
            let (fm, gm) = (f.reduce_mod_p(pr(p)), g.reduce_mod_p(pr(p)));
            let mut conv = 0u64;
            for k in 0..p {
                let nf = (0..p).filter(|&x| fm.eval(&[x]) == k).count() as u64;
                let ng = (0..p).filter(|&y| gm.eval(&[y]) == (p - k) % p).count() as u64;
                conv += nf * ng;
            }
            prop_assert_eq!(n1, conv);
        }
    }
}
