//! Acceptance criteria, one PASS/FAIL line each. All comparisons are exact.
//! Runs without the libtest harness so every line is printed.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use igusa::euclid::{mu_nu_sums, orbit};
use igusa::mpoly::{parse_polynomial, Monomial, Polynomial};
use igusa::newton::{build_polyhedron, NewtonPolyhedron};
use igusa::numeric::{rat, PrimeSpec, Rational};
use igusa::oracle::{count_mod, measure_series, partition_check, verify_theorem, CountSeries, DEFAULT_BUDGET};
use igusa::spf::{spf_evaluate, sup_bound, ResidueDomain, SupMode, DEFAULT_DEPTH_GUARD};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    id: u32,
    name: &'static str,
    passed: bool,
}

fn pr(p: u64) -> PrimeSpec {
    PrimeSpec::new(p).unwrap()
}

fn poly(s: &str) -> Polynomial {
    parse_polynomial(s).unwrap()
}

fn timed(
    id: u32,
    name: &'static str,
    limit_secs: u64,
    body: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_secs);
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if elapsed > limit {
        passed = false;
        detail = format!("{detail}; over time limit");
    }
    println!(
        "{} [{id}] {name} | tolerance exact | {elapsed:.2?} (limit {limit:?}) | {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    Outcome { id, name, passed }
}

// 1 ----------------------------------------------------------------------

fn lemma_suite() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for c in 1..=40i64 {
        for d in 1..=40i64 {
            let o = orbit(c, d).map_err(|e| e.to_string())?;
            let g = c.gcd(&d);
            let (e, e_prime) = (c / g, d / g);
            if o.period as i64 != e + e_prime - 1 {
                return Err(format!("period of ({c},{d}) is {}", o.period));
            }
            if o.states[o.period] != (c, d) || o.states[1..o.period].contains(&(c, d)) {
                return Err(format!("orbit of ({c},{d}) does not wrap exactly at its period"));
            }
            for _ in 0..20 {
                let (ct, dt) = (rng.gen_range(-50..=50), rng.gen_range(-50..=50));
                let s = mu_nu_sums(&o, ct, dt);
                if s.mu_sum != c.lcm(&d) || s.nu_sum != e * dt + e_prime * ct {
                    return Err(format!("sums of ({c},{d}) with ({ct},{dt}) are {} and {}", s.mu_sum, s.nu_sum));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("1600 pairs, {checked} (c~, d~) samples"))
}

// 2 ----------------------------------------------------------------------

/// Rank over Q by fraction-free elimination.
fn rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for k in 0..cols {
                    m[i][k] = m[i][k] * a - m[r][k] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

/// Facets by exhaustive search over primitive normals with entries ≤ bound:
/// `a` is a facet normal iff the face it cuts out has dimension `n - 1`.
fn brute_facets(n: usize, pts: &[Vec<i64>], bound: i64) -> BTreeSet<(Vec<i64>, i64)> {
    let mut out = BTreeSet::new();
    let mut a = vec![0i64; n];
    loop {
        let mut k = 0;
        while k < n {
            a[k] += 1;
            if a[k] <= bound {
                break;
            }
            a[k] = 0;
            k += 1;
        }
        if k == n {
            return out;
        }
        if a.iter().fold(0i64, |g, &x| g.gcd(&x)) != 1 {
            continue;
        }
        let dot = |q: &Vec<i64>| a.iter().zip(q).map(|(x, y)| x * y).sum::<i64>();
        let m = pts.iter().map(dot).min().unwrap();
        let meet: Vec<&Vec<i64>> = pts.iter().filter(|q| dot(q) == m).collect();
        let mut dirs: Vec<Vec<i128>> =
            meet.iter().skip(1).map(|q| q.iter().zip(meet[0]).map(|(x, y)| (x - y) as i128).collect()).collect();
        for i in (0..n).filter(|&i| a[i] == 0) {
            let mut e = vec![0i128; n];
            e[i] = 1;
            dirs.push(e);
        }
        if rank(&dirs) == n - 1 {
            out.insert((a.clone(), m));
        }
    }
}

fn random_support(rng: &mut ChaCha8Rng, n: usize) -> BTreeSet<Monomial> {
    let size = rng.gen_range(2..=6).min(5usize.pow(n as u32) - 1);
    let mut s = BTreeSet::new();
    while s.len() < size {
        let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
        if e.iter().any(|&x| x > 0) {
            s.insert(Monomial(e));
        }
    }
    s
}

fn newton_suite() -> Result<String, String> {
    let p = build_polyhedron(&poly("x^2 + y^3")).map_err(|e| e.to_string())?;
    let got: BTreeSet<(Vec<i64>, i64)> = p.facets().iter().map(|f| (f.normal.clone(), f.m_value)).collect();
    let want: BTreeSet<(Vec<i64>, i64)> =
        [(vec![1, 0], 0), (vec![0, 1], 0), (vec![3, 2], 6)].into_iter().collect();
    if got != want {
        return Err(format!("x^2 + y^3 facets {got:?}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut corpus = 0;
    for n in 1..=3usize {
        for _ in 0..8 {
            let support = random_support(&mut rng, n);
            let pts: Vec<Vec<i64>> = support.iter().map(Monomial::as_i64).collect();
            let poly = NewtonPolyhedron::from_support(n, support).map_err(|e| e.to_string())?;
            let got: BTreeSet<(Vec<i64>, i64)> =
                poly.facets().iter().map(|f| (f.normal.clone(), f.m_value)).collect();
            // maximal minors of differences bound the normal entries
            let bound = [0, 1, 4, 32][n];
            let want = brute_facets(n, &pts, bound);
            if got != want {
                return Err(format!("support {pts:?}: facets {got:?}, expected {want:?}"));
            }
            for f in poly.facets() {
                let meet = pts.iter().filter(|q| q.iter().zip(&f.normal).map(|(x, y)| x * y).sum::<i64>() == f.m_value);
                if meet.count() != f.meet_support.len() {
                    return Err(format!("support {pts:?}: meet locus of {:?}", f.normal));
                }
            }
            corpus += 1;
        }
    }
    Ok(format!("cusp facets exact, {corpus} random polyhedra match exhaustive search"))
}

// 3 ----------------------------------------------------------------------

fn spf_oracle(series: &mut Vec<CountSeries>) -> Result<String, String> {
    let depth = 10;
    let mut cases = 0;
    for text in ["x", "x^2 + x", "x^2 - 5", "x + y", "x^2 + 3*x + y"] {
        for p in [3, 5] {
            let f = poly(text);
            let (z, _) = spf_evaluate(&f, &ResidueDomain::full(f.nvars(), pr(p)), pr(p), DEFAULT_DEPTH_GUARD)
                .map_err(|e| format!("{text} at p = {p}: {e}"))?;
            let counts = count_mod(&f, pr(p), depth, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            if counts.truncated {
                return Err(format!("{text} at p = {p}: count truncated"));
            }
            let oracle = measure_series(&counts);
            let spf = z.expand(oracle.depth());
            if spf.coeffs != oracle.coeffs {
                return Err(format!("{text} at p = {p}: {:?} vs {:?}", spf.strings(), oracle.strings()));
            }
            series.push(counts);
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, coefficients t^0..t^{} equal", depth - 1))
}

// 4 ----------------------------------------------------------------------

fn perturbation() -> Result<String, String> {
    let f = poly("x^2 + x");
    let mut notes = Vec::new();
    let mut failed = false;
    for p in [3u64, 5] {
        let full = ResidueDomain::full(1, pr(p));
        let base = spf_evaluate(&f, &full, pr(p), DEFAULT_DEPTH_GUARD).map_err(|e| e.to_string())?.0;
        let perturbed = |beta: u32| {
            let g = f.add(&poly("x^5").scale(&pr(p).pow(beta)));
            spf_evaluate(&g, &full, pr(p), DEFAULT_DEPTH_GUARD).map(|r| r.0.same_function(&base))
        };
        match sup_bound(&f, &full, pr(p), SupMode::Ell, 16) {
            Ok(c) => {
                let beta = 2 * c as u32 + 2;
                let same = perturbed(beta).map_err(|e| e.to_string())?;
                notes.push(format!("p = {p}: c = {c}, beta = {beta}, equal = {same}"));
                failed |= !same;
            }
            Err(e) => {
                // the L-supremum is certified; record the same comparison with it
                let cl = sup_bound(&f, &full, pr(p), SupMode::L, 16).map_err(|e| e.to_string())?;
                let beta = 2 * cl as u32 + 2;
                let same = perturbed(beta).map_err(|e| e.to_string())?;
                notes.push(format!(
                    "p = {p}: c(f,D) not certified ({e}); 2x + 1 vanishes at -1/2 in Z_{p}; with C(f,D) = {cl}, beta = {beta}: equal = {same}"
                ));
                failed = true;
            }
        }
    }
    if failed {
        Err(notes.join("; "))
    } else {
        Ok(notes.join("; "))
    }
}

// 5 ----------------------------------------------------------------------

fn main_theorem(series: &mut Vec<CountSeries>, cusp: bool) -> Result<String, String> {
    let cases: &[(&str, &str, u64, usize, usize)] =
        if cusp { &[("x^2", "y^3", 5, 9, 6)] } else { &[("x^2", "y^2", 5, 8, 4), ("x", "y", 3, 8, 3)] };
    let mut notes = Vec::new();
    for &(f, g, p, depth, max_deg) in cases {
        let r = verify_theorem(&poly(f), &poly(g), pr(p), depth, max_deg, DEFAULT_BUDGET)
            .map_err(|e| format!("({f}, {g}): {e}"))?;
        if !r.success || r.residuals.iter().any(|c| c != &Rational::from_integer(0.into())) {
            return Err(format!("({f}, {g}): residuals {:?}", r.residuals));
        }
        let allowed = ["-1", "-5/6"];
        if r.poles_surviving.iter().any(|s| !allowed.contains(&s.as_str())) {
            return Err(format!("({f}, {g}): surviving poles {:?}", r.poles_surviving));
        }
        if (f, g) == ("x", "y") {
            let h = poly("x + y");
            let (z, _) = spf_evaluate(&h, &ResidueDomain::full(2, pr(p)), pr(p), DEFAULT_DEPTH_GUARD)
                .map_err(|e| e.to_string())?;
            if z.expand(r.series.depth()).coeffs != r.series.coeffs {
                return Err("x + y: counted series differs from stationary phase".into());
            }
        }
        notes.push(format!(
            "({f}, {g}, p = {p}, depth {depth}): P = {}, surviving {:?}, {} nodes",
            r.numerator.as_ref().unwrap(),
            r.poles_surviving,
            r.counts.nodes
        ));
        series.push(r.counts);
    }
    Ok(notes.join("; "))
}

// 6 ----------------------------------------------------------------------

fn cone_partition() -> Result<String, String> {
    let mut notes = Vec::new();
    for p in [3, 5] {
        let r = partition_check(&poly("x^2"), &poly("y^3"), pr(p), 6, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        if !r.ok {
            return Err(format!("p = {p}: {:?} vs {:?}", r.unrestricted, r.summed));
        }
        notes.push(format!("p = {p}: {} cells, levels 0..=6", r.cells));
    }
    Ok(notes.join("; "))
}

// 7 ----------------------------------------------------------------------

fn oracle_sanity(mut series: Vec<CountSeries>) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let n = rng.gen_range(1..=2usize);
        let support = random_support(&mut rng, n);
        let vars: Vec<String> = ["x", "y"][..n].iter().map(|s| s.to_string()).collect();
        let terms = support.into_iter().map(|m| (m, BigInt::from(rng.gen_range(-6i64..=6))));
        let f = Polynomial::from_terms(vars, terms);
        if f.is_zero() {
            continue;
        }
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        series.push(count_mod(&f, pr(p), 4, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?);
    }
    for s in &series {
        if !s.is_sane() {
            return Err(format!("{} at p = {}: counts {:?}", s.f, s.p, s.counts));
        }
    }
    let x2 = count_mod(&poly("x^2"), pr(5), 3, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    if x2.counts != vec![rat(1, 1), rat(5, 1), rat(5, 1)] {
        return Err(format!("x^2 counts {:?}", x2.counts));
    }
    Ok(format!("{} series nested with nonnegative volumes", series.len()))
}

fn main() {
    let mut series = Vec::new();
    let outcomes = [timed(1, "technical lemma suite", 1, lemma_suite),
        timed(2, "Newton polyhedron facets and H/V consistency", 5, newton_suite),
        timed(3, "stationary phase equals oracle series", 30, || spf_oracle(&mut series)),
        timed(4, "perturbation invariance with certified c(f,D)", 5, perturbation),
        timed(5, "main theorem denominator (x^2,y^2), (x,y)", 10, || main_theorem(&mut series, false)),
        timed(5, "main theorem denominator, cusp (x^2,y^3)", 600, || main_theorem(&mut series, true)),
        timed(6, "cone partition of x^2 + y^3", 120, cone_partition),
        timed(7, "oracle sanity", 60, || oracle_sanity(std::mem::take(&mut series)))];
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| format!("[{}] {}", o.id, o.name)).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
