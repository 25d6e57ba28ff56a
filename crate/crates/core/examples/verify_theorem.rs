//! Checking the claimed denominator of `Z(f ⊕ g; s)` against counted series.
//!
//! ```bash
//! cargo run --release --example verify_theorem
//! ```

use igusa::mpoly::parse_polynomial;
use igusa::numeric::PrimeSpec;
use igusa::oracle::{partition_check, verify_theorem, DEFAULT_BUDGET};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (f, g, p, depth, max_deg) in [("x^2", "y^2", 5, 8, 4), ("x", "y", 3, 8, 3), ("x^2", "y^3", 3, 9, 6)] {
        let (f, g) = (parse_polynomial(f)?, parse_polynomial(g)?);
        let r = verify_theorem(&f, &g, PrimeSpec::new(p)?, depth, max_deg, DEFAULT_BUDGET)?;
        println!("f = {f}, g = {g}, p = {p}: ok = {}", r.success);
        if let Some(num) = &r.numerator {
            println!("  P(t) = {num}");
        }
        println!("  candidate poles {:?}, surviving {:?}", r.candidate_poles, r.poles_surviving);
    }

    let r = partition_check(&parse_polynomial("x^2")?, &parse_polynomial("y^3")?, PrimeSpec::new(3)?, 5, DEFAULT_BUDGET)?;
    println!("{} product cells sum to the full count: {}", r.cells, r.ok);
    Ok(())
}
