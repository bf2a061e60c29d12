use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use klein_hasse::arith::primes_below;
use klein_hasse::certify::{certify, validate_json, CertStatus};
use klein_hasse::config::Config;
use klein_hasse::cubic::MonicCubic;
use klein_hasse::localsolve::count_points_fp;
use klein_hasse::quartic::{twist_from_cubic, QuarticForm, MONOMIALS};
use klein_hasse::tracecheck::{count_points_ec, EllipticCurveW};

/// Naive count over all of 𝔽_p³ minus the origin, divided by `p − 1`.
fn brute_count(form: &QuarticForm, p: u64) -> u64 {
    let p = p as i64;
    let coeffs: Vec<(i64, [u32; 3])> = form
        .coefficients()
        .iter()
        .zip(MONOMIALS)
        .map(|(c, m)| ((c % BigInt::from(p)).to_i64().unwrap().rem_euclid(p), m))
        .collect();
    let pow = |b: i64, e: u32| (0..e).fold(1i64, |acc, _| acc * b % p);
    let mut zeros = 0u64;
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                if (x, y, z) == (0, 0, 0) {
                    continue;
                }
                let v = coeffs.iter().fold(0i64, |acc, (c, [i, j, k])| {
                    (acc + c * pow(x, *i) % p * pow(y, *j) % p * pow(z, *k)) % p
                });
                if v == 0 {
                    zeros += 1;
                }
            }
        }
    }
    zeros / (p as u64 - 1)
}

fn example_twists() -> Vec<QuarticForm> {
    [(-7i64, 7i64), (-4921, 132_867), (-3_587_227, 2_615_088_483)]
        .into_iter()
        .flat_map(|(b, c)| [(b, c), (b, -c)])
        .map(|(b, c)| twist_from_cubic(&MonicCubic::depressed(b, c)).unwrap())
        .collect()
}

#[test]
fn point_counts_agree_with_brute_force() {
    let mut forms = vec![QuarticForm::klein(), QuarticForm::c_zero()];
    forms.extend(example_twists());
    for form in &forms {
        for p in primes_below(24) {
            assert_eq!(
                count_points_fp(form, p),
                brute_count(form, p),
                "{} mod {p}",
                form.label()
            );
        }
    }
}

#[test]
fn klein_has_trace_zero_off_one_mod_seven() {
    let k = QuarticForm::klein();
    for p in primes_below(200)
        .into_iter()
        .filter(|p| *p != 7 && p % 7 != 1)
    {
        assert_eq!(count_points_fp(&k, p), p + 1, "p = {p}");
    }
}

#[test]
fn reference_curve_counts() {
    let e = EllipticCurveW::REFERENCE;
    assert_eq!(e.discriminant(), -343);
    let counts: Vec<u64> = [11, 23, 29, 37, 43]
        .iter()
        .map(|&p| count_points_ec(&e, p).unwrap())
        .collect();
    assert_eq!(counts, [8, 16, 28, 44, 56]);
}

#[test]
fn certified_example_round_trips_through_json() {
    let config = Config {
        height_bound: 50,
        prime_bound: 2000,
        ..Config::default()
    };
    let cert = certify(&MonicCubic::depressed(-4921, 132_867), &config);
    assert_eq!(cert.status, CertStatus::CounterexampleCertified);
    let json = cert.to_json();
    validate_json(&json).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["status"], "counterexample_certified");
    assert_eq!(v["rational_search"]["bound"], 50);
}

fn reference_trace(p: u64) -> i64 {
    p as i64 + 1 - count_points_ec(&EllipticCurveW::REFERENCE, p).unwrap() as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn klein_count_obeys_weil_bound(i in 0usize..40) {
        let p = primes_below(400).into_iter().filter(|p| *p != 7).nth(i).unwrap();
        let n = count_points_fp(&QuarticForm::klein(), p) as f64;
        prop_assert!((n - (p as f64 + 1.0)).abs() <= 6.0 * (p as f64).sqrt());
    }

    #[test]
    fn klein_count_is_three_reference_traces(i in 0usize..12) {
        let p = primes_below(600).into_iter().filter(|p| p % 7 == 1).nth(i).unwrap();
        let n = count_points_fp(&QuarticForm::klein(), p) as i64;
        prop_assert_eq!(n, p as i64 + 1 - 3 * reference_trace(p));
    }

    #[test]
    fn twists_match_brute_force(b in -60i64..60, c in -60i64..60, i in 0usize..5) {
        let Ok(form) = twist_from_cubic(&MonicCubic::depressed(b, c)) else { return Ok(()) };
        let p = [3u64, 5, 11, 13, 17][i];
        prop_assert_eq!(count_points_fp(&form, p), brute_count(&form, p));
    }
}
