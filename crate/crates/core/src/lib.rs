//! Igusa local zeta functions of Thom-Sebastiani sums: Newton polyhedra,
//! denominator data, stationary phase evaluation and a brute-force p-adic
//! point-counting oracle, all in exact arithmetic.

pub mod numeric;
pub mod upoly;
pub mod mpoly;
pub mod linalg;
pub mod newton;
pub mod noncrit;
pub mod euclid;
pub mod tsden;
pub mod ratfun;
pub mod spf;
pub mod oracle;
pub mod cli;
