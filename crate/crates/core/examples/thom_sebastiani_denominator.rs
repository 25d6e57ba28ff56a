//! Denominator and candidate poles of `Z(f ⊕ g; s)`.
//!
//! ```bash
//! cargo run --example thom_sebastiani_denominator -- "x^2 + z^2" "y^3"
//! ```

use igusa::mpoly::parse_polynomial;
use igusa::tsden::denominator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let f = parse_polynomial(&args.next().unwrap_or_else(|| "x^2".into()))?;
    let g = parse_polynomial(&args.next().unwrap_or_else(|| "y^3".into()))?;
    let den = denominator(&f, &g)?;

    println!("f = {f}, g = {g}");
    for pair in &den.factors {
        let (qpow, tpow) = pair.exponent.powers().expect("finite exponents only");
        println!("  a = {:?}, b = {:?}: m_f = {}, m_g = {}, factor 1 - q^-{qpow} t^{tpow}", pair.a, pair.b, pair.m_f, pair.m_g);
    }
    println!("denominator {}", den.to_text());
    println!("candidate real parts {:?}", den.candidate_poles().strings());
    if let Some(w) = &den.warning {
        println!("warning: {w}");
    }
    Ok(())
}
