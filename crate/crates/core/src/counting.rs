//! Gaussian binomial coefficients and related exact counting.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

/// Number of `k`-subspaces of `F_q^v`, as an exact integer.
///
/// `q = 1` degenerates to the ordinary binomial coefficient. Computed as
/// the iterated product `prod_{i=1}^{k} (q^{v-k+i} - 1) / (q^i - 1)`; every
/// intermediate quotient is itself a Gaussian binomial, so the division is
/// exact at each step.
pub fn gaussian(v: u64, k: u64, q: u64) -> Result<BigUint> {
    if q == 0 {
        return Err(domain("q must be at least 1"));
    }
    if k > v {
        return Err(domain(format!("k = {k} exceeds v = {v}")));
    }
    if q == 1 {
        return Ok(binomial(v, k));
    }
    let q = BigUint::from(q);
    let mut result = BigUint::one();
    for i in 1..=k {
        let num = q.pow((v - k + i) as u32) - BigUint::one();
        let den = q.pow(i as u32) - BigUint::one();
        let prod = result * num;
        debug_assert!((&prod % &den).is_zero());
        result = prod / den;
    }
    Ok(result)
}

/// [`gaussian`] narrowed to `u64`; errors when the value does not fit.
pub fn gaussian_u64(v: u64, k: u64, q: u64) -> Result<u64> {
    let g = gaussian(v, k, q)?;
    u64::try_from(&g).map_err(|_| domain(format!("[{v} choose {k}]_{q} = {g} exceeds u64")))
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k.min(n));
    let mut result = BigUint::one();
    for i in 1..=k {
        result = result * BigUint::from(n - k + i) / BigUint::from(i);
    }
    result
}

/// `q^n` as a `BigUint`.
pub fn q_pow(q: u64, n: u64) -> BigUint {
    BigUint::from(q).pow(n as u32)
}
