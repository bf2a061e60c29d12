//! Frobenius traces of twists of the Klein quartic over 𝔽_p, checked against
//! the classification in terms of the CM curve `y² + xy = x³ + 5x² + 7x`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Roots;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime_u64;
use crate::localsolve::count_points_fp;
use crate::quartic::QuarticForm;
use crate::{Error, Result};

/// Long Weierstrass model `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EllipticCurveW {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
}

impl EllipticCurveW {
    /// `y² + xy = x³ + 5x² + 7x`, conductor 49, CM by ℚ(√−7).
    pub const REFERENCE: EllipticCurveW = EllipticCurveW {
        a1: 1,
        a2: 5,
        a3: 0,
        a4: 7,
        a6: 0,
    };

    pub fn discriminant(&self) -> i128 {
        let [a1, a2, a3, a4, a6] = [self.a1, self.a2, self.a3, self.a4, self.a6].map(i128::from);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }
}

impl fmt::Display for EllipticCurveW {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}, {}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Number of `y ∈ 𝔽_p` with `y² = d`, for odd `p`.
fn square_roots_mod(d: u64, p: u64) -> u64 {
    if d == 0 {
        1
    } else if pow_mod(d, (p - 1) / 2, p) == 1 {
        2
    } else {
        0
    }
}

/// `#E(𝔽_p)`, point at infinity included, by sweeping `x` and solving the
/// quadratic in `y`.
pub fn count_points_ec(e: &EllipticCurveW, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if e.discriminant().rem_euclid(p as i128) == 0 {
        return Err(Error::SingularReduction(p));
    }
    let m = |v: i64| v.rem_euclid(p as i64) as u128;
    let pp = p as u128;
    let (a1, a2, a3, a4, a6) = (m(e.a1), m(e.a2), m(e.a3), m(e.a4), m(e.a6));
    let mut count = 1u64;
    for x in 0..pp {
        let rhs = (((x + a2) * x % pp + a4) * x % pp + a6) % pp;
        let lin = (a1 * x + a3) % pp;
        if p == 2 {
            count += (0..2u128).filter(|y| (y * y + lin * y) % 2 == rhs).count() as u64;
        } else {
            // (2y + lin)² = lin² + 4·rhs
            let d = (lin * lin + 4 * rhs) % pp;
            count += square_roots_mod(d as u64, p);
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceSet {
    pub p: u64,
    pub residue_class: u64,
    /// Trace of Frobenius on the reference curve, when it enters the set.
    pub t: Option<i64>,
    /// `s ≥ 0` with `t² + 7s² = 4p`.
    pub s: Option<i64>,
    pub allowed: BTreeSet<i64>,
    pub components: Vec<(String, i64)>,
}

impl TraceSet {
    pub fn contains(&self, trace: i64) -> bool {
        self.allowed.contains(&trace)
    }

    /// Labels of the components equal to `trace`.
    pub fn matches(&self, trace: i64) -> Vec<&str> {
        self.components
            .iter()
            .filter(|(_, v)| *v == trace)
            .map(|(l, _)| l.as_str())
            .collect()
    }
}

pub fn allowed_traces(p: u64) -> Result<TraceSet> {
    allowed_traces_with(&EllipticCurveW::REFERENCE, p)
}

/// Trace set built from an arbitrary curve in place of the reference one.
pub fn allowed_traces_with(e: &EllipticCurveW, p: u64) -> Result<TraceSet> {
    if matches!(p, 2 | 3 | 7) {
        return Err(Error::InvalidArgument(format!(
            "trace set undefined at p = {p}"
        )));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let residue_class = p % 7;
    if matches!(residue_class, 3 | 5 | 6) {
        return Ok(TraceSet {
            p,
            residue_class,
            t: None,
            s: None,
            allowed: BTreeSet::from([0]),
            components: vec![("0".into(), 0)],
        });
    }
    let t = p as i64 + 1 - count_points_ec(e, p)? as i64;
    let rest = 4 * p as i64 - t * t;
    let s = if rest >= 0 && rest % 7 == 0 {
        Some((rest / 7).sqrt())
    } else {
        None
    };
    let s = s
        .filter(|s| t * t + 7 * s * s == 4 * p as i64)
        .ok_or_else(|| Error::Internal(format!("no s with t² + 7s² = 4p at p = {p}, t = {t}")))?;
    let components: Vec<(String, i64)> = vec![
        ("3t".into(), 3 * t),
        ("-3t".into(), -3 * t),
        ("0".into(), 0),
        ("t".into(), t),
        ("-t".into(), -t),
        ("(-t-7s)/2".into(), (-t - 7 * s) / 2),
        ("(-t+7s)/2".into(), (-t + 7 * s) / 2),
        ("(t-7s)/2".into(), (t - 7 * s) / 2),
        ("(t+7s)/2".into(), (t + 7 * s) / 2),
    ];
    let allowed = components.iter().map(|(_, v)| *v).collect();
    Ok(TraceSet {
        p,
        residue_class,
        t: Some(t),
        s: Some(s),
        allowed,
        components,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceMembership {
    pub p: u64,
    pub count: u64,
    pub trace: i64,
    pub member: bool,
    pub matched: Vec<String>,
    /// `p + 1` is in the allowed set, i.e. an empty reduction is not ruled out.
    pub p_plus_one_allowed: bool,
    pub set: TraceSet,
}

pub fn verify_trace_membership(form: &QuarticForm, p: u64) -> Result<TraceMembership> {
    let set = allowed_traces(p)?;
    if !form.is_smooth_mod_p(p) {
        return Err(Error::SingularReduction(p));
    }
    let count = count_points_fp(form, p);
    let trace = p as i64 + 1 - count as i64;
    Ok(TraceMembership {
        p,
        count,
        trace,
        member: set.contains(trace),
        matched: set.matches(trace).into_iter().map(String::from).collect(),
        p_plus_one_allowed: set.contains(p as i64 + 1),
        set,
    })
}

/// Membership at every prime below `limit` other than 2, 3, 7 where the form
/// has smooth reduction, in increasing order of `p`.
pub fn trace_sweep(form: &QuarticForm, limit: u64) -> Result<Vec<TraceMembership>> {
    let primes: Vec<u64> = crate::arith::primes_below(limit)
        .into_iter()
        .filter(|p| !matches!(p, 2 | 3 | 7) && form.is_smooth_mod_p(*p))
        .collect();
    primes
        .par_iter()
        .map(|&p| verify_trace_membership(form, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::MonicCubic;
    use crate::quartic::twist_from_cubic;
    use proptest::prelude::*;

    /// Brute-force count over all (x, y), independent of the quadratic formula.
    fn brute_count(e: &EllipticCurveW, p: u64) -> u64 {
        let p = p as i64;
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                let lhs = y * y + e.a1 * x * y + e.a3 * y;
                let rhs = x * x * x + e.a2 * x * x + e.a4 * x + e.a6;
                if (lhs - rhs).rem_euclid(p) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn reference_discriminant() {
        assert_eq!(EllipticCurveW::REFERENCE.discriminant(), -343);
        assert_eq!(
            count_points_ec(&EllipticCurveW::REFERENCE, 7),
            Err(Error::SingularReduction(7))
        );
    }

    #[test]
    fn reference_counts() {
        let e = EllipticCurveW::REFERENCE;
        for (p, n) in [(11, 8), (23, 16), (29, 28), (37, 44), (43, 56)] {
            assert_eq!(count_points_ec(&e, p).unwrap(), n, "p = {p}");
            assert_eq!(brute_count(&e, p), n);
        }
        assert_eq!(count_points_ec(&e, 2).unwrap(), brute_count(&e, 2));
    }

    #[test]
    fn frobenius_values() {
        // π_E = ±2±√−7, ±4±√−7, ±1±2√−7
        for (p, abs_t, s) in [(11, 4, 2), (23, 8, 2), (29, 2, 4)] {
            let set = allowed_traces(p).unwrap();
            assert_eq!(set.t.unwrap().abs(), abs_t);
            assert_eq!(set.s, Some(s));
        }
        // 3t = p + 1 at 11 and 23, so only 29 excludes an empty reduction
        assert!(allowed_traces(11).unwrap().matches(12).contains(&"3t"));
        assert!(allowed_traces(23).unwrap().matches(24).contains(&"3t"));
        assert!(!allowed_traces(29).unwrap().contains(30));
        let eleven = allowed_traces(11).unwrap();
        for v in [0, 4, -4, 12, -12, 5, -5, 9, -9] {
            assert!(eleven.contains(v), "{v}");
        }
    }

    #[test]
    fn inert_residues_give_zero() {
        for p in [5, 13, 17, 19, 31, 41, 47] {
            assert_eq!(allowed_traces(p).unwrap().allowed, BTreeSet::from([0]));
        }
        assert!(allowed_traces(7).is_err());
        assert!(allowed_traces(2).is_err());
    }

    #[test]
    fn klein_membership() {
        let k = QuarticForm::klein();
        let five = verify_trace_membership(&k, 5).unwrap();
        assert_eq!((five.trace, five.member), (0, true));
        assert!(verify_trace_membership(&k, 11).unwrap().member);
        for m in trace_sweep(&k, 50).unwrap() {
            assert!(
                m.member,
                "p = {}: trace {} not in {:?}",
                m.p, m.trace, m.set.allowed
            );
        }
    }

    #[test]
    fn twist_membership() {
        let f = twist_from_cubic(&MonicCubic::depressed(-7, 7)).unwrap();
        let m = verify_trace_membership(&f, 13).unwrap();
        assert!(m.member);
        assert_eq!(m.trace, 0);
        for m in trace_sweep(&f, 50).unwrap() {
            assert!(
                m.member,
                "p = {}: trace {} not in {:?}",
                m.p, m.trace, m.set.allowed
            );
        }
    }

    #[test]
    fn twist_with_empty_reduction_at_eleven() {
        let f = twist_from_cubic(&MonicCubic::depressed(-40, -38)).unwrap();
        let m = verify_trace_membership(&f, 11).unwrap();
        assert_eq!((m.count, m.trace), (0, 12));
        assert!(m.member && m.p_plus_one_allowed);
        assert_eq!(m.matched, ["3t"]);
    }

    #[test]
    fn singular_reduction_is_rejected() {
        let f = twist_from_cubic(&MonicCubic::depressed(-7, 7)).unwrap();
        let bad = (5..60).find(|&p| is_prime_u64(p) && p != 7 && !f.is_smooth_mod_p(p));
        if let Some(p) = bad {
            assert_eq!(
                verify_trace_membership(&f, p).unwrap_err(),
                Error::SingularReduction(p)
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn norm_equation_and_hasse_bound(idx in 0usize..160) {
            let primes: Vec<u64> = crate::arith::primes_below(1000).into_iter().filter(|p| *p != 7).collect();
            let p = primes[idx % primes.len()];
            let n = count_points_ec(&EllipticCurveW::REFERENCE, p).unwrap() as i64;
            let t = p as i64 + 1 - n;
            prop_assert!(t * t <= 4 * p as i64);
            if matches!(p % 7, 1 | 2 | 4) && p != 2 {
                let set = allowed_traces(p).unwrap();
                let (t, s) = (set.t.unwrap(), set.s.unwrap());
                prop_assert_eq!(t * t + 7 * s * s, 4 * p as i64);
                let weil = 6.0 * (p as f64).sqrt();
                prop_assert!(set.allowed.iter().all(|a| (*a as f64).abs() <= weil));
            }
        }
    }
}
