use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::cache::FactorCache;
use super::prime::{is_prime, small_primes};
use crate::Error;

/// Trial division covers every prime up to this bound.
pub const TRIAL_LIMIT: u64 = 1_000_000;

/// Default Pollard-rho budget, in gcd batches.
pub const DEFAULT_FACTOR_BUDGET: u64 = 1 << 16;

const BATCH: u64 = 128;
const MAX_POLYNOMIALS: u64 = 24;

/// Prime factorization `n = ∏ pᵢ^eᵢ · cofactor`, where a cofactor other than 1
/// is a composite the rho budget could not split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
}

impl Factorization {
    pub fn unit() -> Self {
        Factorization {
            factors: Vec::new(),
            cofactor: BigUint::one(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Product of all listed prime powers and the cofactor.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    fn from_map(map: BTreeMap<BigUint, u32>, cofactor: BigUint) -> Self {
        Factorization {
            factors: map.into_iter().collect(),
            cofactor,
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| format!("{p}^{e}"))
            .collect();
        if !self.cofactor.is_one() {
            parts.push(format!("C{}", self.cofactor));
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" * "))
    }
}

impl FromStr for Factorization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |what: &str| Error::Parse(format!("{what} in factorization `{s}`"));
        let s = s.trim();
        if s == "1" {
            return Ok(Factorization::unit());
        }
        let mut map = BTreeMap::new();
        let mut cofactor = BigUint::one();
        for term in s.split('*').map(str::trim) {
            if let Some(c) = term.strip_prefix('C') {
                cofactor *= BigUint::from_str(c).map_err(|_| bad("bad cofactor"))?;
                continue;
            }
            let (p, e) = match term.split_once('^') {
                Some((p, e)) => (p, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                None => (term, 1),
            };
            let p = BigUint::from_str(p.trim()).map_err(|_| bad("bad prime"))?;
            *map.entry(p).or_insert(0) += e;
        }
        Ok(Factorization::from_map(map, cofactor))
    }
}

/// Factor `n` by trial division up to [`TRIAL_LIMIT`] followed by Brent's
/// Pollard-rho, spending at most `budget` gcd batches.
pub fn factorize(n: &BigUint, budget: u64) -> Factorization {
    if n.is_zero() {
        return Factorization {
            factors: Vec::new(),
            cofactor: BigUint::zero(),
        };
    }
    let mut map = BTreeMap::new();
    let mut rest = trial_divide(n, &mut map);
    if rest.is_one() {
        return Factorization::from_map(map, rest);
    }
    let limit = BigUint::from(TRIAL_LIMIT);
    if rest < &limit * &limit {
        // no prime ≤ TRIAL_LIMIT divides it, so it is prime
        map.insert(rest, 1);
        return Factorization::from_map(map, BigUint::one());
    }

    let mut budget = budget;
    let mut cofactor = BigUint::one();
    let mut pending = vec![std::mem::take(&mut rest)];
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *map.entry(m).or_insert(0) += 1;
            continue;
        }
        match split(&m, &mut budget) {
            Some(d) => {
                let other = &m / &d;
                pending.push(d);
                pending.push(other);
            }
            None => cofactor *= m,
        }
    }
    Factorization::from_map(map, cofactor)
}

/// [`factorize`] consulting and updating an optional on-disk cache.
pub fn factorize_cached(n: &BigUint, budget: u64, cache: Option<&FactorCache>) -> Factorization {
    if let Some(hit) = cache
        .and_then(|c| c.get(n))
        .filter(Factorization::is_complete)
    {
        return hit;
    }
    let fact = factorize(n, budget);
    if let Some(cache) = cache {
        // a failed write only costs a recomputation later
        let _ = cache.insert(n, &fact);
    }
    fact
}

fn trial_divide(n: &BigUint, map: &mut BTreeMap<BigUint, u32>) -> BigUint {
    let mut rest = n.clone();
    for &p in small_primes() {
        if let Some(small) = rest.to_u64() {
            return BigUint::from(trial_divide_u64(small, p, map));
        }
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            map.insert(BigUint::from(p), e);
        }
    }
    rest
}

fn trial_divide_u64(mut m: u64, from: u64, map: &mut BTreeMap<BigUint, u32>) -> u64 {
    for &p in small_primes().iter().skip_while(|&&q| q < from) {
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            map.insert(BigUint::from(p), e);
        }
    }
    if m > 1 && m < TRIAL_LIMIT * TRIAL_LIMIT {
        *map.entry(BigUint::from(m)).or_insert(0) += 1;
        return 1;
    }
    m
}

/// A nontrivial divisor of the composite `m`, or `None` once the budget runs out.
fn split(m: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if let Some(r) = perfect_square_root(m) {
        return Some(r);
    }
    for c in 1..=MAX_POLYNOMIALS {
        if *budget == 0 {
            return None;
        }
        let found = match m.to_u64() {
            Some(small) => rho_u64(small, c, budget).map(BigUint::from),
            None => rho_big(m, c, budget),
        };
        if let Some(d) = found {
            return Some(d);
        }
    }
    None
}

fn perfect_square_root(m: &BigUint) -> Option<BigUint> {
    let r = m.sqrt();
    (&r * &r == *m).then_some(r)
}

fn rho_big(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let step = |v: &BigUint| (v * v + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = step(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = q * diff % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = step(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn rho_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let step = |v: u64| ((v as u128 * v as u128 + c as u128) % n as u128) as u64;
    let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
    let (mut q, mut g, mut r) = (1u64, 1u64, 1u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = step(y);
                q = mul(q, x.abs_diff(y));
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = step(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g != 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}
