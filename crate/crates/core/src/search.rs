//! The conjectural family `N = 3^(3+6c′) + 1 = 2²·7·∏ pᵢ^(3eᵢ−2)`, which yields
//! `B = −7∏ pᵢ^eᵢ` and `C = ±3^(3c′)·7·∏ pᵢ`.

use std::fmt;
use std::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{factorize_cached, FactorCache, Factorization};
use crate::cubic::MonicCubic;
use crate::{Error, Result};

pub fn is_excluded(c_prime: u64) -> bool {
    c_prime % 7 == 3
}

/// `3^(3+6c′) + 1` without the residue check.
pub fn family_n(c_prime: u64) -> BigUint {
    let e = u32::try_from(3 + 6 * c_prime).expect("exponent fits in u32");
    BigUint::from(3u32).pow(e) + 1u32
}

pub fn candidate_n(c_prime: u64) -> Result<BigUint> {
    if is_excluded(c_prime) {
        return Err(Error::Excluded(format!("c' = {c_prime} is 3 mod 7")));
    }
    Ok(family_n(c_prime))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternFailure {
    Incomplete { cofactor: BigUint },
    TwoExponent(u32),
    SevenExponent(u32),
    DivisibleByThree,
    Exponent { p: BigUint, e: u32 },
}

impl fmt::Display for PatternFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternFailure::Incomplete { cofactor } => {
                write!(f, "incomplete factorization (cofactor {cofactor})")
            }
            PatternFailure::TwoExponent(e) => write!(f, "exponent of 2 is {e}"),
            PatternFailure::SevenExponent(e) => write!(f, "exponent of 7 is {e}"),
            PatternFailure::DivisibleByThree => f.write_str("divisible by 3"),
            PatternFailure::Exponent { p, e } => write!(f, "exponent of {p} is {e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pattern {
    /// `2²·7·∏ pᵢ^(3eᵢ−2)`.
    #[default]
    Fixed,
    /// `2^(3a+2)·7^(3b−2)·∏ pᵢ^(3eᵢ−2)`; never used for deriving parameters.
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCheck {
    pub pass: bool,
    pub failure: Option<PatternFailure>,
}

impl PatternCheck {
    /// The prime at which the exponent pattern breaks, if any.
    pub fn failing_prime(&self) -> Option<BigUint> {
        match &self.failure {
            Some(PatternFailure::TwoExponent(_)) => Some(2u32.into()),
            Some(PatternFailure::SevenExponent(_)) => Some(7u32.into()),
            Some(PatternFailure::DivisibleByThree) => Some(3u32.into()),
            Some(PatternFailure::Exponent { p, .. }) => Some(p.clone()),
            _ => None,
        }
    }
}

pub fn pattern_check(fact: &Factorization) -> PatternCheck {
    pattern_check_with(fact, Pattern::Fixed)
}

pub fn pattern_check_with(fact: &Factorization, pattern: Pattern) -> PatternCheck {
    let fail = |failure| PatternCheck {
        pass: false,
        failure: Some(failure),
    };
    if !fact.is_complete() {
        return fail(PatternFailure::Incomplete {
            cofactor: fact.cofactor.clone(),
        });
    }
    let two = fact.exponent_of(&2u32.into());
    let seven = fact.exponent_of(&7u32.into());
    let (two_ok, seven_ok) = match pattern {
        Pattern::Fixed => (two == 2, seven == 1),
        Pattern::General => (two % 3 == 2, seven % 3 == 1),
    };
    if !two_ok {
        return fail(PatternFailure::TwoExponent(two));
    }
    if !seven_ok {
        return fail(PatternFailure::SevenExponent(seven));
    }
    if fact.exponent_of(&3u32.into()) > 0 {
        return fail(PatternFailure::DivisibleByThree);
    }
    let special = [2u32, 3, 7].map(BigUint::from);
    for (p, e) in &fact.factors {
        if !special.contains(p) && e % 3 != 1 {
            return fail(PatternFailure::Exponent {
                p: p.clone(),
                e: *e,
            });
        }
    }
    PatternCheck {
        pass: true,
        failure: None,
    }
}

/// `(B, |C|)` from a factorization that passed [`pattern_check`].
pub fn derive_bc(c_prime: u64, fact: &Factorization) -> (BigInt, BigUint) {
    let mut b_part = BigUint::one();
    let mut radical = BigUint::one();
    for (p, e) in fact
        .factors
        .iter()
        .filter(|(p, _)| *p != 2u32.into() && *p != 7u32.into())
    {
        b_part *= p.pow(e.div_ceil(3));
        radical *= p;
    }
    let b = -BigInt::from(7u32 * b_part);
    let three_pow =
        BigUint::from(3u32).pow(u32::try_from(3 * c_prime).expect("exponent fits in u32"));
    (b, three_pow * 7u32 * radical)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub c_prime: u64,
    pub n: BigUint,
    pub factorization: Factorization,
    pub b: BigInt,
    pub c_abs: BigUint,
}

impl SearchHit {
    /// `x³ + Bx + C` with `C = |C|`, and its sign partner.
    pub fn cubics(&self) -> [MonicCubic; 2] {
        let c = BigInt::from(self.c_abs.clone());
        let plus = MonicCubic::depressed(self.b.clone(), c);
        let minus = plus.with_negated_c();
        [plus, minus]
    }

    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factorization
            .factors
            .iter()
            .map(|(p, e)| json!([p.to_string(), e]))
            .collect();
        json!({
            "c_prime": self.c_prime,
            "N": self.n.to_string(),
            "factors": factors,
            "B": self.b.to_string(),
            "C_abs": self.c_abs.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    ResidueExcluded,
    PatternFailed(PatternFailure),
    FactorizationIncomplete { cofactor: BigUint },
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::ResidueExcluded => f.write_str("residue-excluded"),
            SkipReason::PatternFailed(why) => write!(f, "pattern-failed: {why}"),
            SkipReason::FactorizationIncomplete { cofactor } => {
                write!(f, "factorization-incomplete: cofactor {cofactor}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub c_prime: u64,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchOutcome {
    pub hits: Vec<SearchHit>,
    pub skipped: Vec<Skipped>,
}

fn examine(
    c_prime: u64,
    budget: u64,
    cache: Option<&FactorCache>,
) -> std::result::Result<SearchHit, SkipReason> {
    if is_excluded(c_prime) {
        return Err(SkipReason::ResidueExcluded);
    }
    let n = family_n(c_prime);
    let fact = factorize_cached(&n, budget, cache);
    let check = pattern_check(&fact);
    match check.failure {
        None => {
            let (b, c_abs) = derive_bc(c_prime, &fact);
            Ok(SearchHit {
                c_prime,
                n,
                factorization: fact,
                b,
                c_abs,
            })
        }
        // a prime already found off-pattern decides the case even without a full factorization
        Some(PatternFailure::Incomplete { cofactor }) => match partial_failure(&fact) {
            Some(why) => Err(SkipReason::PatternFailed(why)),
            None => Err(SkipReason::FactorizationIncomplete { cofactor }),
        },
        Some(why) => Err(SkipReason::PatternFailed(why)),
    }
}

/// Pattern failure visible from the fully split part alone. Exponents of 2, 3
/// and 7 are final since the cofactor has no factor below the trial limit.
fn partial_failure(fact: &Factorization) -> Option<PatternFailure> {
    let complete = Factorization {
        factors: fact.factors.clone(),
        cofactor: BigUint::one(),
    };
    pattern_check(&complete).failure
}

/// Runs the family over `range`, in parallel, sorted by `c′`.
pub fn search(range: Range<u64>, budget: u64, cache: Option<&FactorCache>) -> SearchOutcome {
    let results: Vec<(u64, std::result::Result<SearchHit, SkipReason>)> = range
        .into_par_iter()
        .map(|c| (c, examine(c, budget, cache)))
        .collect();
    let mut outcome = SearchOutcome::default();
    for (c_prime, r) in results {
        match r {
            Ok(hit) => outcome.hits.push(hit),
            Err(reason) => outcome.skipped.push(Skipped { c_prime, reason }),
        }
    }
    outcome
}
