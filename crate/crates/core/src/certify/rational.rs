use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::primes_below;
use crate::localsolve::univariate::real_roots_in;
use crate::quartic::{QuarticForm, MONOMIALS};

const SIEVE_PRIMES_BELOW: u64 = 64;

/// `(y, z) mod p` admits some `x` with `F(x, y, z) ≡ 0 mod p`.
struct Sieve {
    p: i64,
    ok: Vec<bool>,
}

impl Sieve {
    fn new(form: &QuarticForm, p: u64) -> Option<Sieve> {
        let m = form.reduce_mod(p);
        if m.is_zero() {
            return None;
        }
        let mut ok = vec![false; (p * p) as usize];
        for y in 0..p {
            for z in 0..p {
                let c = m.in_x(y, z);
                ok[(y * p + z) as usize] = (0..p).any(|x| {
                    c.iter()
                        .rev()
                        .fold(0u128, |acc, &a| (acc * x as u128 + a as u128) % p as u128)
                        == 0
                });
            }
        }
        Some(Sieve { p: p as i64, ok })
    }

    fn admits(&self, y: i64, z: i64) -> bool {
        self.ok[(y.rem_euclid(self.p) * self.p + z.rem_euclid(self.p)) as usize]
    }
}

/// Coefficients of `F(x, y, z)` in `x`, constant term first.
fn exact_in_x(form: &QuarticForm, y: i64, z: i64) -> [BigInt; 5] {
    let (y, z) = (BigInt::from(y), BigInt::from(z));
    let mut out: [BigInt; 5] = Default::default();
    for (c, [i, j, k]) in form.coefficients().iter().zip(MONOMIALS) {
        if !c.is_zero() {
            out[i as usize] += c * y.pow(j) * z.pow(k);
        }
    }
    out
}

fn primitive(x: BigInt, y: i64, z: i64) -> [BigInt; 3] {
    let pt = [x, BigInt::from(y), BigInt::from(z)];
    let g = pt.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return pt;
    }
    pt.map(|v| v / &g)
}

fn zero_on_line(form: &QuarticForm, y: i64, z: i64, bound: i64) -> Option<[BigInt; 3]> {
    let exact = exact_in_x(form, y, z);
    if exact.iter().all(Zero::is_zero) {
        return Some(primitive(BigInt::zero(), y, z));
    }
    let approx: Vec<f64> = exact
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    let scale = approx.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let approx: Vec<f64> = approx.iter().map(|c| c / scale).collect();
    let reach = bound as f64 + 1.0;
    for r in real_roots_in(&approx, -reach, reach, 1e-12) {
        for x in [r.floor(), r.ceil()] {
            if x.abs() > bound as f64 {
                continue;
            }
            let x = BigInt::from(x as i64);
            let value = exact
                .iter()
                .rev()
                .fold(BigInt::zero(), |acc, c| acc * &x + c);
            if value.is_zero() {
                return Some(primitive(x, y, z));
            }
        }
    }
    None
}

/// The `(y, z)` with `max(|y|, |z|) = h`, one per sign class, in scan order.
fn ring(h: i64) -> impl Iterator<Item = (i64, i64)> {
    let top = (-h..=h).map(move |y| (y, h));
    let sides = (1..h).flat_map(move |z| [(-h, z), (h, z)]);
    top.chain(sides).chain(std::iter::once((h, 0)))
}

/// First primitive `(x : y : z)` with `F = 0` and `max(|x|, |y|, |z|) ≤ bound`.
///
/// Lines `(y : z)` are scanned by increasing height, each filtered by a
/// residue sieve before its integer roots in `x` are located numerically and
/// confirmed exactly. `(1 : 0 : 0)` is tried first.
pub fn rational_point_search(form: &QuarticForm, bound: u64) -> Option<[BigInt; 3]> {
    if bound == 0 {
        return None;
    }
    if form.coefficient(4, 0, 0).is_zero() {
        return Some([1.into(), 0.into(), 0.into()]);
    }
    let sieves: Vec<Sieve> = primes_below(SIEVE_PRIMES_BELOW)
        .into_iter()
        .filter_map(|p| Sieve::new(form, p))
        .collect();
    let bound = i64::try_from(bound).expect("height bound fits in i64");
    (1..=bound).into_par_iter().find_map_first(|h| {
        ring(h)
            .filter(|&(y, z)| sieves.iter().all(|s| s.admits(y, z)))
            .find_map(|(y, z)| zero_on_line(form, y, z, bound))
    })
}

/// `F` vanishes exactly at a primitive triple.
pub fn is_rational_point(form: &QuarticForm, pt: &[BigInt; 3]) -> bool {
    let g = pt.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    g.abs() == BigInt::from(1) && form.evaluate(pt, None).is_zero()
}
