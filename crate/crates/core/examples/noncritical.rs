//! Newton non-criticality with witnesses and the reduction check.
//!
//! ```bash
//! cargo run --example noncritical
//! ```

use igusa::mpoly::parse_polynomial;
use igusa::noncrit::{check_noncritical, Mode, NonCritParams};
use igusa::numeric::PrimeSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = NonCritParams { reduction_prime: Some(PrimeSpec::new(5)?), ..NonCritParams::default() };
    for text in ["x^2 + y^3", "x^2 + 2*x*y + y^2", "x^2*y - 2*x*y + y^3", "x^5 + y^5"] {
        let f = parse_polynomial(text)?;
        let exact = check_noncritical(&f, Mode::ExactSmall, &params)?;
        let heuristic = check_noncritical(&f, Mode::FiniteFieldHeuristic, &params)?;
        println!("{text}");
        println!("  exact: {}  finite field: {}", exact.verdict, heuristic.verdict);
        for (face, w) in exact.witnesses() {
            println!("  face {face}: {} at {:?}", w.locus, w.point);
        }
        if let Some(r) = &exact.reduction {
            println!("  mod {}: {} (disagrees: {})", r.prime, r.verdict, r.disagrees);
        }
    }
    Ok(())
}
