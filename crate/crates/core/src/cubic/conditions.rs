use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::{discriminant, MonicCubic};
use crate::arith::{exact_square_root, factorize, valuation, Factorization};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionStatus {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionStatus::Pass => "pass",
            ConditionStatus::Fail => "fail",
            ConditionStatus::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub status: ConditionStatus,
    pub evidence: String,
}

impl Condition {
    fn new(holds: bool, evidence: impl Into<String>) -> Self {
        let status = if holds {
            ConditionStatus::Pass
        } else {
            ConditionStatus::Fail
        };
        Condition {
            status,
            evidence: evidence.into(),
        }
    }
}

/// Divisibility data for one prime of `Δ` outside {2, 3, 7}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCheck {
    pub p: BigUint,
    pub divides_b: bool,
    /// `None` when `C = 0`.
    pub valuation_c: Option<u32>,
}

impl PrimeCheck {
    pub fn holds(&self) -> bool {
        self.divides_b && self.valuation_c == Some(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub odd_c: Condition,
    pub b_prime_to_3: Condition,
    pub seven_exact: Condition,
    pub other_primes: Condition,
    pub prime_checks: Vec<PrimeCheck>,
    pub delta_factorization: Factorization,
}

impl ConditionReport {
    /// The four conditions in order (i)–(iv).
    pub fn all(&self) -> [(&'static str, &Condition); 4] {
        [
            ("i", &self.odd_c),
            ("ii", &self.b_prime_to_3),
            ("iii", &self.seven_exact),
            ("iv", &self.other_primes),
        ]
    }
}

/// Factors `|Δ|`, going through `√Δ` when `Δ` is a perfect square.
pub(crate) fn factor_discriminant(delta: &BigInt, budget: u64) -> Factorization {
    let mag = delta.magnitude().clone();
    if let Some(root) = exact_square_root(delta) {
        let half = factorize(root.magnitude(), budget);
        return Factorization {
            factors: half
                .factors
                .iter()
                .map(|(p, e)| (p.clone(), 2 * e))
                .collect(),
            cofactor: &half.cofactor * &half.cofactor,
        };
    }
    factorize(&mag, budget)
}

fn seven_exactly_divides(c: &BigInt) -> bool {
    !c.is_zero() && valuation(c, &BigInt::from(7)).ok() == Some(1)
}

/// Evaluates the arithmetic hypotheses (i)–(iv) on a depressed cubic.
pub fn check_conditions(f: &MonicCubic, factor_budget: u64) -> Result<ConditionReport> {
    if !f.is_depressed() {
        return Err(Error::NonDepressed(f.a.to_string()));
    }
    let (b, c) = (&f.b, &f.c);
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let seven = BigInt::from(7);

    let odd_c = Condition::new(c.is_odd(), format!("C mod 2 = {}", c.mod_floor(&two)));
    let b_prime_to_3 = Condition::new(
        !b.is_multiple_of(&three),
        format!("B mod 3 = {}", b.mod_floor(&three)),
    );
    let seven_b = b.is_multiple_of(&seven);
    let v7c = if c.is_zero() {
        None
    } else {
        valuation(c, &seven).ok()
    };
    let seven_exact = Condition::new(
        seven_b && seven_exactly_divides(c),
        format!(
            "7 | B: {seven_b}; v_7(C) = {}",
            v7c.map_or_else(|| "inf".to_string(), |v| v.to_string())
        ),
    );

    let delta = discriminant(f);
    let fact = factor_discriminant(&delta, factor_budget);
    let mut prime_checks = Vec::new();
    for p in fact.primes() {
        if [2u32, 3, 7].iter().any(|small| *p == BigUint::from(*small)) {
            continue;
        }
        let pi = BigInt::from_biguint(Sign::Plus, p.clone());
        let valuation_c = if c.is_zero() {
            None
        } else {
            valuation(c, &pi).ok()
        };
        prime_checks.push(PrimeCheck {
            p: p.clone(),
            divides_b: b.is_multiple_of(&pi),
            valuation_c,
        });
    }
    let failing: Vec<String> = prime_checks
        .iter()
        .filter(|pc| !pc.holds())
        .map(|pc| pc.p.to_string())
        .collect();
    let other_primes = if !failing.is_empty() {
        Condition {
            status: ConditionStatus::Fail,
            evidence: format!("fails at p = {}", failing.join(", ")),
        }
    } else if !fact.is_complete() {
        Condition {
            status: ConditionStatus::Unknown,
            evidence: format!("incomplete factorization: cofactor {}", fact.cofactor),
        }
    } else if prime_checks.is_empty() {
        Condition::new(true, format!("vacuous: |Δ| = {fact}"))
    } else {
        let listed: Vec<String> = prime_checks.iter().map(|pc| pc.p.to_string()).collect();
        Condition::new(
            true,
            format!("p | B and p || C for p = {}", listed.join(", ")),
        )
    };

    Ok(ConditionReport {
        odd_c,
        b_prime_to_3,
        seven_exact,
        other_primes,
        prime_checks,
        delta_factorization: fact,
    })
}
