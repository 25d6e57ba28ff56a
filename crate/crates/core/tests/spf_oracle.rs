use igusa::mpoly::{parse_polynomial, Polynomial};
use igusa::numeric::{rat, PrimeSpec};
use igusa::oracle::{count_mod, measure_series, DEFAULT_BUDGET};
use igusa::spf::{spf_evaluate, sup_bound, ResidueDomain, SupMode};
use proptest::prelude::*;

fn pr(p: u64) -> PrimeSpec {
    PrimeSpec::new(p).unwrap()
}

fn quadratic(a: i64, b: i64, c: i64, extra: &str) -> Polynomial {
    parse_polynomial(&format!("{a}*x^2 + {b}*x + {c}{extra}").replace("+ -", "- ")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn terminating_recursion_matches_counts(
        a in -9i64..10, b in -9i64..10, c in -9i64..10, two in any::<bool>(), pi in 0usize..2,
    ) {
        let p = [3u64, 5][pi];
        let f = quadratic(a, b, c, if two { " + x*y + y" } else { "" });
        prop_assume!(!f.is_zero());
        let d = ResidueDomain::full(f.nvars(), pr(p));
        let z = spf_evaluate(&f, &d, pr(p), 12);
        prop_assume!(z.is_ok());
        let (z, trace) = z.unwrap();
        prop_assert!(trace.depth() <= 12);
        let depth = if two { 5 } else { 8 };
        let counts = count_mod(&f, pr(p), depth, None, DEFAULT_BUDGET).unwrap();
        let oracle = measure_series(&counts);
        prop_assert_eq!(z.expand(oracle.depth()).coeffs, oracle.coeffs);
    }

    #[test]
    fn perturbation_beyond_twice_the_supremum(
        a in -9i64..10, b in -9i64..10, c in -9i64..10, pi in 0usize..2,
    ) {
        let p = [3u64, 5][pi];
        let f = quadratic(a, b, c, "");
        prop_assume!(!f.is_zero());
        let d = ResidueDomain::full(1, pr(p));
        let bound = sup_bound(&f, &d, pr(p), SupMode::Ell, 12);
        prop_assume!(bound.is_ok());
        let beta = 2 * bound.unwrap() as u32 + 2;
        let g = f.add(&parse_polynomial("x^5 + x").unwrap().scale(&pr(p).pow(beta)));
        let (base, _) = spf_evaluate(&f, &d, pr(p), 32).unwrap();
        let (moved, _) = spf_evaluate(&g, &d, pr(p), 32).unwrap();
        prop_assert!(base.same_function(&moved));
    }
}

#[test]
fn unit_torus_volumes_by_valuation() {
    // with x a unit, v(x + y) = k >= 1 means y in -x + p^k Z_p minus p^(k+1)
    let p = pr(5);
    let f = parse_polynomial("x + y").unwrap();
    let (z, _) = spf_evaluate(&f, &ResidueDomain::unit_torus(2, p), p, 32).unwrap();
    let mut expect = vec![rat(12, 25)];
    expect.extend((1..6).map(|k| rat(16, 25 * 5i64.pow(k))));
    assert_eq!(z.expand(5).coeffs, expect);
}
