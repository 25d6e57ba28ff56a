//! Denominator data of `Z(f ⊕ g; s)`: the exponents `c_{a,b}(s)` over pairs
//! of facet normals and the resulting candidate poles.
//!
//! With `t = q^{-s}`, a finite exponent `c_{a,b}(s) = -ls - e|b| - e'|a|`
//! gives the factor `1 - q^{-(e|b| + e'|a|)} t^l`, stored as the pair
//! `(q_power, t_power)`. `q` stays symbolic here.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::mpoly::Polynomial;
use crate::newton::{NewtonError, NewtonPolyhedron};
use crate::noncrit::{check_noncritical, Mode, NonCritParams, Verdict};
use crate::numeric::{rational_string, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TsdenError {
    #[error("variable `{0}` occurs in both polynomials")]
    VariableCollision(String),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AffineExponent {
    Finite { t_power: i64, q_power: i64 },
    MinusInfinity,
}

impl AffineExponent {
    /// `(q_power, t_power)` of a finite exponent.
    pub fn powers(&self) -> Option<(i64, i64)> {
        match *self {
            AffineExponent::Finite { t_power, q_power } => Some((q_power, t_power)),
            AffineExponent::MinusInfinity => None,
        }
    }
}

/// `c_{a,b}` from `m_f(a)`, `m_g(b)`, `|a|`, `|b|`.
pub fn c_ab(m_f: i64, m_g: i64, abs_a: i64, abs_b: i64) -> AffineExponent {
    if m_f <= 0 || m_g <= 0 {
        return AffineExponent::MinusInfinity;
    }
    let g = m_f.gcd(&m_g);
    let (e, e_prime) = (m_f / g, m_g / g);
    AffineExponent::Finite { t_power: m_f.lcm(&m_g), q_power: e * abs_b + e_prime * abs_a }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairFactor {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub m_f: i64,
    pub m_g: i64,
    pub exponent: AffineExponent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSDenominator {
    /// Pairs with a finite exponent, with multiplicity, in facet order.
    pub factors: Vec<PairFactor>,
    /// Pairs with `m_f(a) = 0` or `m_g(b) = 0`.
    pub inert: Vec<PairFactor>,
    /// Set when non-criticality of `f` or `g` is not certified.
    pub warning: Option<String>,
}

impl TSDenominator {
    /// All factors as `(q_power, t_power)`, the universal `(1, 1)` first.
    pub fn factor_powers(&self) -> Vec<(i64, i64)> {
        std::iter::once((1, 1))
            .chain(self.factors.iter().filter_map(|p| p.exponent.powers()))
            .collect()
    }

    pub fn candidate_poles(&self) -> CandidatePoleSet {
        candidate_poles(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let factors: Vec<serde_json::Value> = self
            .factors
            .iter()
            .map(|p| {
                let (qpow, tpow) = p.exponent.powers().unwrap();
                serde_json::json!({ "a": p.a, "b": p.b, "qpow": qpow, "tpow": tpow })
            })
            .collect();
        let inert: Vec<serde_json::Value> =
            self.inert.iter().map(|p| serde_json::json!({ "a": p.a, "b": p.b })).collect();
        let mut j = serde_json::json!({
            "universal": { "qpow": 1, "tpow": 1 },
            "factors": factors,
            "inert": inert,
            "poles": self.candidate_poles().strings(),
        });
        if let Some(w) = &self.warning {
            j["warning"] = serde_json::Value::String(w.clone());
        }
        j
    }

    /// Text form `(1 - q^-1 t)(1 - q^-5 t^6)`.
    pub fn to_text(&self) -> String {
        self.factor_powers().iter().map(|&(a, b)| format!("({})", factor_text(a, b))).collect()
    }
}

/// `1 - q^-A t^B` in text form.
pub fn factor_text(a: i64, b: i64) -> String {
    let q = match a {
        0 => String::new(),
        _ => format!("q^-{a} "),
    };
    let t = match b {
        1 => "t".to_string(),
        _ => format!("t^{b}"),
    };
    format!("1 - {q}{t}")
}

fn normals(p: &NewtonPolyhedron) -> Vec<(Vec<i64>, i64)> {
    p.facets().iter().map(|f| (f.normal.clone(), f.m_value)).collect()
}

fn noncrit_warning(name: &str, f: &Polynomial) -> Result<Option<String>, NewtonError> {
    let r = check_noncritical(f, Mode::ExactSmall, &NonCritParams::default())?;
    Ok(match (r.verdict, r.heuristic) {
        (Verdict::NonCritical, false) => None,
        (Verdict::NonCritical, true) => {
            Some(format!("{name} is Newton non-critical only by finite-field search"))
        }
        (Verdict::Critical, _) => Some(format!("{name} is not Newton non-critical")),
        (Verdict::Inconclusive, _) => Some(format!("Newton non-criticality of {name} is undecided")),
    })
}

/// Denominator of `Z(f ⊕ g; s)` over all pairs of facet normals.
pub fn denominator(f: &Polynomial, g: &Polynomial) -> Result<TSDenominator, TsdenError> {
    let (pf, pg) = (NewtonPolyhedron::build(f)?, NewtonPolyhedron::build(g)?);
    denominator_with_check(f, g, &pf, &pg, true)
}

/// As [`denominator`], optionally skipping the non-criticality check.
pub fn denominator_with_check(
    f: &Polynomial,
    g: &Polynomial,
    pf: &NewtonPolyhedron,
    pg: &NewtonPolyhedron,
    check: bool,
) -> Result<TSDenominator, TsdenError> {
    if let Some(v) = f.vars().iter().find(|v| g.vars().contains(v)) {
        return Err(TsdenError::VariableCollision(v.clone()));
    }
    let mut factors = Vec::new();
    let mut inert = Vec::new();
    for (a, m_f) in normals(pf) {
        for (b, m_g) in normals(pg) {
            let exponent = c_ab(m_f, m_g, a.iter().sum(), b.iter().sum());
            let pair = PairFactor { a: a.clone(), b, m_f, m_g, exponent };
            match exponent {
                AffineExponent::Finite { .. } => factors.push(pair),
                AffineExponent::MinusInfinity => inert.push(pair),
            }
        }
    }
    let warning = if check {
        let w: Vec<String> =
            [noncrit_warning("f", f)?, noncrit_warning("g", g)?].into_iter().flatten().collect();
        (!w.is_empty()).then(|| w.join("; "))
    } else {
        None
    };
    Ok(TSDenominator { factors, inert, warning })
}

/// Real parts of the candidate poles, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidatePoleSet {
    pub poles: BTreeSet<Rational>,
}

impl CandidatePoleSet {
    pub fn strings(&self) -> Vec<String> {
        self.poles.iter().map(rational_string).collect()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.poles.contains(r)
    }
}

/// `{-1} ∪ {-q_power / t_power}`.
pub fn candidate_poles(den: &TSDenominator) -> CandidatePoleSet {
    CandidatePoleSet {
        poles: den
            .factor_powers()
            .into_iter()
            .map(|(a, b)| -Rational::new(a.into(), b.into()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_polynomial;
    use crate::numeric::rat;
    use proptest::prelude::*;

    fn den(f: &str, g: &str) -> TSDenominator {
        denominator(&parse_polynomial(f).unwrap(), &parse_polynomial(g).unwrap()).unwrap()
    }

    #[test]
    fn c_ab_examples() {
        assert_eq!(c_ab(2, 3, 1, 1), AffineExponent::Finite { t_power: 6, q_power: 5 });
        assert_eq!(c_ab(0, 7, 1, 1), AffineExponent::MinusInfinity);
        assert_eq!(c_ab(1, 1, 1, 1), AffineExponent::Finite { t_power: 1, q_power: 2 });
    }

    #[test]
    fn denominator_examples() {
        assert_eq!(den("x^2", "y^3").factor_powers(), vec![(1, 1), (5, 6)]);
        assert_eq!(den("x^2", "y^3").to_text(), "(1 - q^-1 t)(1 - q^-5 t^6)");
        assert_eq!(den("x^2", "y^2").factor_powers(), vec![(1, 1), (2, 2)]);
        let d = den("x^2 + z^2", "y^3");
        assert_eq!(d.factor_powers(), vec![(1, 1), (8, 6)]);
        assert_eq!(d.factors[0].a, vec![1, 1]);
        assert_eq!(d.inert.len(), 2);
        assert!(d.warning.is_none());
        let w = den("x^2 + x", "y").warning.unwrap();
        assert!(w.contains("f is not Newton non-critical"));
    }

    /// The factor for `x^2 + z^2` and `y^3` must match the quasi-homogeneous
    /// prediction: weights `1/2, 1/2, 1/3` give the pole `-(1/2+1/2+1/3)`.
    #[test]
    fn quasi_homogeneous_pole() {
        let poles = den("x^2 + z^2", "y^3").candidate_poles();
        assert!(poles.contains(&-(rat(1, 2) + rat(1, 2) + rat(1, 3))));
        let poles = den("x^2", "y^3").candidate_poles();
        assert!(poles.contains(&-(rat(1, 2) + rat(1, 3))));
    }

    #[test]
    fn poles_examples() {
        assert_eq!(den("x^2", "y^3").candidate_poles().strings(), vec!["-1", "-5/6"]);
        assert_eq!(den("x^2", "y^2").candidate_poles().strings(), vec!["-1"]);
        assert_eq!(den("x", "y").candidate_poles().strings(), vec!["-2", "-1"]);
    }

    #[test]
    fn collisions_and_origin() {
        let f = parse_polynomial("x^2").unwrap();
        assert_eq!(denominator(&f, &f), Err(TsdenError::VariableCollision("x".into())));
        let g = parse_polynomial("y + 1").unwrap();
        assert_eq!(denominator(&f, &g), Err(TsdenError::Newton(NewtonError::OriginInSupport)));
    }

    #[test]
    fn json_shape() {
        let j = den("x^2", "y^3").to_json();
        assert_eq!(j["universal"], serde_json::json!({"qpow": 1, "tpow": 1}));
        assert_eq!(j["factors"][0], serde_json::json!({"a": [1], "b": [1], "qpow": 5, "tpow": 6}));
        assert_eq!(j["poles"], serde_json::json!(["-1", "-5/6"]));
    }

    #[test]
    fn symmetric_in_f_and_g() {
        for (f, g) in [("x^2 + z^2", "y^3"), ("x^2*z + z^4 + x^5", "y^2 + y*w + w^3")] {
            let mut a: Vec<_> = den(f, g).factor_powers();
            let mut b: Vec<_> = den(g, f).factor_powers();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    proptest! {
        #[test]
        fn t_power_is_lcm(mf in 1i64..=100, mg in 1i64..=100, a in 1i64..10, b in 1i64..10) {
            let (q, t) = c_ab(mf, mg, a, b).powers().unwrap();
            prop_assert_eq!(t, mf.lcm(&mg));
            prop_assert_eq!((mf * mg) % t, 0);
            prop_assert!(q >= 2);
        }

        #[test]
        fn pole_set_bounds(e1 in 1u32..5, e2 in 1u32..5, e3 in 1u32..5) {
            let f = parse_polynomial(&format!("x^{e1} + x*z^{e2}")).unwrap();
            let g = parse_polynomial(&format!("y^{e3}")).unwrap();
            let d = denominator(&f, &g).unwrap();
            let poles = d.candidate_poles();
            prop_assert!(poles.contains(&rat(-1, 1)));
            prop_assert!(poles.poles.len() <= d.factors.len() + d.inert.len() + 1);
            let bound = d.factor_powers()[1..].iter().map(|&(a, b)| rat(a, b)).min();
            if let Some(m) = bound {
                for p in poles.poles.iter().filter(|p| **p != rat(-1, 1)) {
                    prop_assert!(*p <= -m.clone());
                }
            }
        }
    }
}
