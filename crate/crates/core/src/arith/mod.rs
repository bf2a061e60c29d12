//! Big-integer arithmetic shared by every other module: primality,
//! factorization, p-adic valuations and exact square roots.

mod cache;
mod factor;
mod prime;

pub use cache::FactorCache;
pub use factor::{factorize, factorize_cached, Factorization, DEFAULT_FACTOR_BUDGET, TRIAL_LIMIT};
pub use prime::{is_prime, is_prime_u64, primes_below};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Largest `k` with `p^k | n`.
pub fn valuation(n: &BigInt, p: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::UndefinedInput("valuation of zero".into()));
    }
    if p <= &BigInt::one() {
        return Err(Error::InvalidArgument(format!(
            "valuation base {p} is not a prime"
        )));
    }
    let mut k = 0;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(k);
        }
        m = q;
        k += 1;
    }
}

/// `valuation` for machine-sized primes; `None` stands for the valuation of zero (+∞).
pub fn valuation_u64(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    valuation(n, &BigInt::from(p)).ok()
}

/// Nonnegative `r` with `r² = n`, if `n` is a perfect square.
pub fn exact_square_root(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Least nonnegative residue of `a` modulo `m > 0`.
pub fn mod_floor_u64(a: &BigInt, m: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(m));
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}
