use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::padic::{hensel_refine, qp_solvable, DEFAULT_DEPTH_CAP};
use super::{real_solvable, smooth_fp_points, LocalStatus, LocalVerdict, Place, Witness};
use crate::arith::{mod_floor_u64, primes_below, DEFAULT_FACTOR_BUDGET};
use crate::cubic::{discriminant, factor_discriminant, MonicCubic};
use crate::quartic::{twist_from_cubic, QuarticForm};
use crate::Result;

/// Places below this bound are checked one by one; the rest fall under Hasse–Weil.
const HASSE_WEIL_FROM: u64 = 37;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalOptions {
    pub depth_cap: u32,
    pub factor_budget: u64,
}

impl Default for LocalOptions {
    fn default() -> Self {
        LocalOptions {
            depth_cap: DEFAULT_DEPTH_CAP,
            factor_budget: DEFAULT_FACTOR_BUDGET,
        }
    }
}

pub type LocalReport = BTreeMap<Place, LocalVerdict>;

/// 2-adic point from the parity argument for odd `C`: `(1:1:1)` when `B` is
/// odd, `(0:1:0)` when `B` is even, lifted along the unit `x`-derivative.
fn two_adic_fast_path(form: &QuarticForm, f: &MonicCubic) -> Option<LocalVerdict> {
    if f.c.is_even() {
        return None;
    }
    let start: [BigInt; 3] = if f.b.is_odd() {
        [1.into(), 1.into(), 1.into()]
    } else {
        [0.into(), 1.into(), 0.into()]
    };
    let (coords, precision) = hensel_refine(form, 2, start)?;
    Some(LocalVerdict {
        place: Place::Prime(2u32.into()),
        status: LocalStatus::HasPoint(Witness::PAdic {
            coords,
            precision,
            level: 1,
        }),
        work: 1,
        method: "parity lemma",
    })
}

fn good_prime_verdict(form: &QuarticForm, p: u64, depth_cap: u32) -> Result<LocalVerdict> {
    let smooth = smooth_fp_points(form, p);
    let work = p * p + p + 1;
    if let Some(pt) = smooth.first() {
        let start = pt.map(BigInt::from);
        if let Some((coords, precision)) = hensel_refine(form, p, start) {
            return Ok(LocalVerdict {
                place: Place::Prime(p.into()),
                status: LocalStatus::HasPoint(Witness::PAdic {
                    coords,
                    precision,
                    level: 1,
                }),
                work,
                method: "smooth F_p point",
            });
        }
    }
    qp_solvable(form, p, depth_cap)
}

fn prime_verdict(form: &QuarticForm, p: &BigUint, depth_cap: u32) -> Result<LocalVerdict> {
    match p.to_u64() {
        Some(small) => qp_solvable(form, small, depth_cap),
        None => Ok(LocalVerdict {
            place: Place::Prime(p.clone()),
            status: LocalStatus::Inconclusive {
                reason: "prime exceeds machine word".into(),
            },
            work: 0,
            method: "lifting tree",
        }),
    }
}

/// Local solvability of the twist attached to `f` at every place of ℚ.
pub fn local_report(f: &MonicCubic, options: &LocalOptions) -> Result<LocalReport> {
    let form = twist_from_cubic(f)?;
    let delta = discriminant(f);
    let fact = factor_discriminant(&delta, options.factor_budget);

    let mut special: BTreeSet<BigUint> = [2u32, 3, 7].into_iter().map(BigUint::from).collect();
    special.extend(fact.primes().cloned());
    let good: Vec<u64> = primes_below(HASSE_WEIL_FROM)
        .into_iter()
        .filter(|&p| !special.contains(&BigUint::from(p)) && mod_floor_u64(&delta, p) != 0)
        .collect();

    enum Job {
        Real,
        Special(BigUint),
        Good(u64),
    }
    let mut jobs = vec![Job::Real];
    jobs.extend(special.iter().cloned().map(Job::Special));
    jobs.extend(good.iter().copied().map(Job::Good));

    let verdicts: Vec<LocalVerdict> = jobs
        .par_iter()
        .map(|job| match job {
            Job::Real => Ok(real_solvable(&form)),
            Job::Special(p) if *p == BigUint::from(2u32) => match two_adic_fast_path(&form, f) {
                Some(v) => Ok(v),
                None => prime_verdict(&form, p, options.depth_cap),
            },
            Job::Special(p) => prime_verdict(&form, p, options.depth_cap),
            Job::Good(p) => good_prime_verdict(&form, *p, options.depth_cap),
        })
        .collect::<Result<_>>()?;

    let mut report: LocalReport = verdicts.into_iter().map(|v| (v.place.clone(), v)).collect();
    report.insert(
        Place::GoodPrimesFrom(HASSE_WEIL_FROM),
        LocalVerdict {
            place: Place::GoodPrimesFrom(HASSE_WEIL_FROM),
            status: LocalStatus::HasPoint(Witness::HasseWeil {
                from: HASSE_WEIL_FROM,
            }),
            work: 0,
            method: "Hasse-Weil bound",
        },
    );
    if !fact.is_complete() && !fact.cofactor.is_zero() {
        let place = Place::Unfactored(fact.cofactor.clone());
        report.insert(
            place.clone(),
            LocalVerdict {
                place,
                status: LocalStatus::Inconclusive {
                    reason: "incomplete factorization of the discriminant".into(),
                },
                work: 0,
                method: "factorization",
            },
        );
    }
    Ok(report)
}
