//! Exact evaluation by the stationary phase formula, with its recursion tree.
//!
//! ```bash
//! cargo run --example stationary_phase -- "x^2 - 5" 5
//! ```

use igusa::mpoly::parse_polynomial;
use igusa::numeric::PrimeSpec;
use igusa::ratfun::reduce;
use igusa::spf::{spf_evaluate, ResidueDomain, SPFTrace, DEFAULT_DEPTH_GUARD};

fn show(node: &SPFTrace, indent: usize) {
    println!(
        "{:indent$}{:?} e = {} E = {}  {}  nu = {} sigma = {}",
        "",
        node.path.last().cloned().unwrap_or_default(),
        node.e,
        node.cumulative,
        node.polynomial,
        node.counts.nu,
        node.counts.sigma,
    );
    for child in &node.children {
        show(child, indent + 2);
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let f = parse_polynomial(&args.next().unwrap_or_else(|| "x^2 - 5".into()))?;
    let p = PrimeSpec::new(args.next().map(|s| s.parse()).transpose()?.unwrap_or(5))?;

    let (z, trace) = spf_evaluate(&f, &ResidueDomain::full(f.nvars(), p), p, DEFAULT_DEPTH_GUARD)?;
    println!("Z = {z}");
    let r = reduce(&z);
    println!("reduced: ({}) / ({})", r.numerator, r.denominator);
    println!("series {:?}", z.expand(6).strings());
    show(&trace, 0);

    let torus = ResidueDomain::unit_torus(f.nvars(), p);
    let (zt, _) = spf_evaluate(&f, &torus, p, DEFAULT_DEPTH_GUARD)?;
    println!("on the unit torus: {zt}");
    Ok(())
}
