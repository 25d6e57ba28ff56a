//! Counting solutions modulo `p^m`, globally and on valuation cones.
//!
//! ```bash
//! cargo run --release --example point_counting
//! ```

use igusa::mpoly::parse_polynomial;
use igusa::newton::build_polyhedron;
use igusa::numeric::{rational_string, PrimeSpec};
use igusa::oracle::{count_mod, count_mod_domains, measure_series, ConeDomainSpec, DEFAULT_BUDGET};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = PrimeSpec::new(5)?;
    let f = parse_polynomial("x^2 + y^3")?;

    let counts = count_mod(&f, p, 6, None, DEFAULT_BUDGET)?;
    let series = measure_series(&counts);
    println!("m\tN_m\tvol(v(f) = m)");
    for (m, c) in series.coeffs.iter().enumerate() {
        println!("{m}\t{}\t{}", rational_string(counts.count(m)), rational_string(c));
    }

    let poly = build_polyhedron(&f)?;
    let cells: Vec<ConeDomainSpec> =
        poly.orthant_partition()?.iter().map(ConeDomainSpec::cone).collect::<Result<_, _>>()?;
    let (total, parts) = count_mod_domains(&f, p, 6, &cells, DEFAULT_BUDGET)?;
    println!("restricted to the cones of the faces:");
    for (cell, part) in poly.orthant_partition()?.iter().zip(&parts) {
        let row: Vec<String> = (0..=part.levels()).map(|m| rational_string(part.count(m))).collect();
        println!("  {:?}: {}", cell.generators(), row.join(" "));
    }
    println!("sanity {}", total.is_sane());
    Ok(())
}
