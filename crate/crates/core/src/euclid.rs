//! The subtractive map `φ_{c,d}` on pairs of positive integers, its
//! periodic orbit and the `μ`/`ν` sums attached to it.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EuclidError {
    #[error("arguments of the map must be positive")]
    NonPositive,
}

/// One application of `φ_{c,d}`:
/// `(c, d)` if `s = t`, `(s - t, d)` if `s > t`, `(c, t - s)` if `s < t`.
pub fn phi_step(state: (i64, i64), base: (i64, i64)) -> Result<(i64, i64), EuclidError> {
    let ((s, t), (c, d)) = (state, base);
    if s <= 0 || t <= 0 || c <= 0 || d <= 0 {
        return Err(EuclidError::NonPositive);
    }
    Ok(match s.cmp(&t) {
        std::cmp::Ordering::Equal => (c, d),
        std::cmp::Ordering::Greater => (s - t, d),
        std::cmp::Ordering::Less => (c, t - s),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiOrbit {
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub e_prime: i64,
    pub period: usize,
    /// `(c_k, d_k)` for `k = 1..=period + 1`; `states[0]` is `(c, d)`.
    pub states: Vec<(i64, i64)>,
}

impl PhiOrbit {
    /// The state `(c_k, d_k)`, 1-based.
    pub fn state(&self, k: usize) -> (i64, i64) {
        self.states[k - 1]
    }

    /// Tab-separated table `k  c_k  d_k`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("k\tc_k\td_k\n");
        for (k, (c, d)) in self.states.iter().enumerate() {
            out.push_str(&format!("{}\t{c}\t{d}\n", k + 1));
        }
        out
    }
}

/// Iterate `φ_{c,d}` from `(c, d)` until it returns.
pub fn orbit(c: i64, d: i64) -> Result<PhiOrbit, EuclidError> {
    if c <= 0 || d <= 0 {
        return Err(EuclidError::NonPositive);
    }
    let g = c.gcd(&d);
    let mut states = vec![(c, d)];
    loop {
        let next = phi_step(*states.last().unwrap(), (c, d))?;
        states.push(next);
        if next == (c, d) {
            break;
        }
    }
    Ok(PhiOrbit { c, d, e: c / g, e_prime: d / g, period: states.len() - 1, states })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuNuSums {
    pub c_tilde: i64,
    pub d_tilde: i64,
    /// `μ_k` for `k = 2..=period + 1`.
    pub mu: Vec<i64>,
    /// `ν_k` for `k = 2..=period + 1`.
    pub nu: Vec<i64>,
    pub mu_sum: i64,
    pub nu_sum: i64,
}

/// `μ_k = min(c_k, d_k)` and `ν_k = c̃ + d̃`, `d̃` or `c̃` according as
/// `c_k = d_k`, `c_k > d_k` or `c_k < d_k`, over one period.
pub fn mu_nu_sums(orbit: &PhiOrbit, c_tilde: i64, d_tilde: i64) -> MuNuSums {
    let (mut mu, mut nu) = (Vec::new(), Vec::new());
    for k in 2..=orbit.period + 1 {
        let (ck, dk) = orbit.state(k);
        mu.push(ck.min(dk));
        nu.push(match ck.cmp(&dk) {
            std::cmp::Ordering::Equal => c_tilde + d_tilde,
            std::cmp::Ordering::Greater => d_tilde,
            std::cmp::Ordering::Less => c_tilde,
        });
    }
    MuNuSums {
        c_tilde,
        d_tilde,
        mu_sum: mu.iter().sum(),
        nu_sum: nu.iter().sum(),
        mu,
        nu,
    }
}

impl MuNuSums {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("k\tmu_k\tnu_k\n");
        for (i, (m, n)) in self.mu.iter().zip(&self.nu).enumerate() {
            out.push_str(&format!("{}\t{m}\t{n}\n", i + 2));
        }
        out.push_str(&format!("sum\t{}\t{}\n", self.mu_sum, self.nu_sum));
        out
    }
}
