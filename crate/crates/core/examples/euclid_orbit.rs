//! The subtractive map on pairs and its periodic orbit.
//!
//! ```bash
//! cargo run --example euclid_orbit -- 4 6
//! ```

use igusa::euclid::{mu_nu_sums, orbit};
use num_integer::Integer;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<i64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let (c, d) = match args[..] {
        [c, d, ..] => (c, d),
        _ => (2, 3),
    };
    let o = orbit(c, d)?;
    print!("{}", o.to_tsv());
    println!("period {} = e + e' - 1 = {} + {} - 1", o.period, o.e, o.e_prime);

    let sums = mu_nu_sums(&o, 3, 7);
    print!("{}", sums.to_tsv());
    println!("lcm({c}, {d}) = {}", c.lcm(&d));
    println!("e * 7 + e' * 3 = {}", o.e * 7 + o.e_prime * 3);
    Ok(())
}
