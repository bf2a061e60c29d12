//! Monic integer cubics `x³ + Ax² + Bx + C`: discriminants, irreducibility,
//! twist-case classification, the arithmetic hypotheses (i)–(iv) and the
//! splitting-field comparisons behind hypothesis (v).

mod conditions;
mod galois;
mod roots;

pub(crate) use conditions::factor_discriminant;
pub use conditions::{check_conditions, Condition, ConditionReport, ConditionStatus, PrimeCheck};
pub use galois::{
    check_condition_v, factorization_shape, reference_cyclotomic_cubic, reference_sextic_cubic,
    splitting_equals, ConditionV, ConditionVReading, DifferenceWitness, FieldReading,
    ReadingVerdict, SplittingComparison,
};
pub use roots::roots_numeric;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::exact_square_root;
use crate::{Error, Result};

/// `x³ + a·x² + b·x + c` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicCubic {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl MonicCubic {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        MonicCubic {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// `x³ + b·x + c`.
    pub fn depressed(b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        MonicCubic::new(0, b, c)
    }

    pub fn is_depressed(&self) -> bool {
        self.a.is_zero()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        ((x + &self.a) * x + &self.b) * x + &self.c
    }

    /// Same cubic with `C` negated (the twin curve of a search hit).
    pub fn with_negated_c(&self) -> Self {
        MonicCubic {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -&self.c,
        }
    }
}

impl fmt::Display for MonicCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("x^3")?;
        for (coef, mono) in [(&self.a, "x^2"), (&self.b, "x"), (&self.c, "")] {
            if coef.is_zero() {
                continue;
            }
            let sign = if coef.is_negative() { '-' } else { '+' };
            let mag = coef.abs();
            if mag.is_one() && !mono.is_empty() {
                write!(f, " {sign} {mono}")?;
            } else {
                write!(f, " {sign} {mag}{mono}")?;
            }
        }
        Ok(())
    }
}

/// Parses `"A B C"` or `"A,B,C"` (coefficients of `x³ + Ax² + Bx + C`).
impl FromStr for MonicCubic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "expected three coefficients, got `{s}`"
            )));
        }
        let mut coefs = parts.iter().map(|t| {
            BigInt::from_str(t).map_err(|_| Error::Parse(format!("bad coefficient `{t}`")))
        });
        let a = coefs.next().unwrap()?;
        let b = coefs.next().unwrap()?;
        let c = coefs.next().unwrap()?;
        Ok(MonicCubic { a, b, c })
    }
}

/// `18ABC − 4A³C + A²B² − 4B³ − 27C²`.
pub fn discriminant(f: &MonicCubic) -> BigInt {
    let (a, b, c) = (&f.a, &f.b, &f.c);
    BigInt::from(18) * a * b * c - BigInt::from(4) * a.pow(3) * c + a * a * b * b
        - BigInt::from(4) * b.pow(3)
        - BigInt::from(27) * c * c
}

fn eisenstein_at(f: &MonicCubic, p: i64) -> bool {
    let p = BigInt::from(p);
    let p2 = &p * &p;
    f.a.is_multiple_of(&p)
        && f.b.is_multiple_of(&p)
        && f.c.is_multiple_of(&p)
        && !f.c.is_multiple_of(&p2)
}

/// True iff `f` has no rational root, i.e. is irreducible over ℚ.
pub fn is_irreducible(f: &MonicCubic) -> bool {
    if eisenstein_at(f, 7) {
        return true;
    }
    integer_roots(f).is_empty()
}

/// All integer roots of a monic cubic (which are all of its rational roots).
///
/// Splits the line at the critical points of `f` into monotone runs and
/// bisects each run exactly.
pub fn integer_roots(f: &MonicCubic) -> Vec<BigInt> {
    let bound: BigInt = f.a.abs().max(f.b.abs()).max(f.c.abs()) + 1u32;
    let mut candidates: Vec<BigInt> = Vec::new();
    let three = BigInt::from(3);
    // f' = 3x² + 2Ax + B vanishes at (−A ± √(A² − 3B)) / 3
    let disc = &f.a * &f.a - &three * &f.b;
    let mut breaks: Vec<(BigInt, BigInt)> = Vec::new();
    if !disc.is_negative() {
        let s: BigInt = disc.sqrt();
        let na: BigInt = -&f.a;
        let lo1: BigInt = Integer::div_floor(&(&na - &s - 1u32), &three) - 1u32;
        let hi1: BigInt = Integer::div_ceil(&(&na - &s), &three) + 1u32;
        let lo2: BigInt = Integer::div_floor(&(&na + &s), &three) - 1u32;
        let hi2: BigInt = Integer::div_ceil(&(&na + &s + 1u32), &three) + 1u32;
        for (lo, hi) in [(&lo1, &hi1), (&lo2, &hi2)] {
            let mut x = lo.clone();
            while &x <= hi {
                candidates.push(x.clone());
                x += 1;
            }
        }
        breaks.push((-&bound, lo1));
        breaks.push((hi1, lo2));
        breaks.push((hi2, bound.clone()));
    } else {
        breaks.push((-&bound, bound.clone()));
    }
    for (lo, hi) in breaks {
        if lo <= hi {
            if let Some(r) = monotone_integer_root(f, lo, hi) {
                candidates.push(r);
            }
        }
    }
    let mut roots: Vec<BigInt> = candidates
        .into_iter()
        .filter(|x| f.eval(x).is_zero())
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

fn monotone_integer_root(f: &MonicCubic, mut lo: BigInt, mut hi: BigInt) -> Option<BigInt> {
    let flo = f.eval(&lo).signum();
    let fhi = f.eval(&hi).signum();
    if flo.is_zero() {
        return Some(lo);
    }
    if fhi.is_zero() {
        return Some(hi);
    }
    if flo == fhi {
        return None;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        let fm = f.eval(&mid).signum();
        if fm.is_zero() {
            return Some(mid);
        }
        if fm == flo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    Case3,
    Case4,
    Case8,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Case3 => "case3",
            CaseTag::Case4 => "case4",
            CaseTag::Case8 => "case8",
        }
    }
}

/// Twist family of a cubic: `Δ = −7q²` (case 3), `Δ = q²` (case 4), otherwise case 8.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCase {
    pub tag: CaseTag,
    pub q: Option<BigInt>,
    pub delta: BigInt,
}

impl TwistCase {
    /// Checks the defining relation between tag, `q` and `Δ`.
    pub fn is_consistent(&self) -> bool {
        if self.delta.is_zero() {
            return false;
        }
        match (&self.tag, &self.q) {
            (CaseTag::Case4, Some(q)) => q.is_positive() && q * q == self.delta,
            (CaseTag::Case3, Some(q)) => q.is_positive() && BigInt::from(-7) * q * q == self.delta,
            (CaseTag::Case8, None) => {
                exact_square_root(&self.delta).is_none() && seven_square_root(&self.delta).is_none()
            }
            _ => false,
        }
    }
}

fn seven_square_root(delta: &BigInt) -> Option<BigInt> {
    let seven = BigInt::from(7);
    if !delta.is_negative() || !delta.is_multiple_of(&seven) {
        return None;
    }
    exact_square_root(&(-delta / seven))
}

pub fn classify_case(f: &MonicCubic) -> Result<TwistCase> {
    if !f.is_depressed() {
        return Err(Error::NonDepressed(f.a.to_string()));
    }
    let delta = discriminant(f);
    if delta.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    if !is_irreducible(f) {
        return Err(Error::Reducible(f.to_string()));
    }
    if let Some(q) = exact_square_root(&delta) {
        return Ok(TwistCase {
            tag: CaseTag::Case4,
            q: Some(q),
            delta,
        });
    }
    if let Some(q) = seven_square_root(&delta) {
        return Ok(TwistCase {
            tag: CaseTag::Case3,
            q: Some(q),
            delta,
        });
    }
    Ok(TwistCase {
        tag: CaseTag::Case8,
        q: None,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cubic(a: i64, b: i64, c: i64) -> MonicCubic {
        MonicCubic::new(a, b, c)
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&cubic(0, -7, 7)), BigInt::from(49));
        assert_eq!(discriminant(&cubic(1, -2, -1)), BigInt::from(49));
        assert_eq!(discriminant(&cubic(0, 0, 0)), BigInt::from(0));
        assert_eq!(discriminant(&cubic(0, 0, -2)), BigInt::from(-108));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&cubic(0, -7, 7)));
        assert!(!is_irreducible(&cubic(0, -1, 0)));
        assert!(is_irreducible(&cubic(1, -2, -1)));
        assert!(!is_irreducible(&cubic(0, 7, 0)));
        // (x − 1000)(x² + 1)
        assert!(!is_irreducible(&cubic(-1000, 1, -1000)));
        // (x − 3)²(x + 6): double root sits on a critical point
        assert!(!is_irreducible(&cubic(0, -27, 54)));
    }

    #[test]
    fn integer_roots_brute_force() {
        for a in -6..=6 {
            for b in -6..=6 {
                for c in -6..=6 {
                    let f = cubic(a, b, c);
                    let brute: Vec<BigInt> = (-20..=20)
                        .map(BigInt::from)
                        .filter(|x| f.eval(x).is_zero())
                        .collect();
                    assert_eq!(integer_roots(&f), brute, "{f}");
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c4 = classify_case(&cubic(0, -7, 7)).unwrap();
        assert_eq!(c4.tag, CaseTag::Case4);
        assert_eq!(c4.q, Some(BigInt::from(7)));

        // Δ = 4921², checked by squaring
        let hit = classify_case(&cubic(0, -4921, 132_867)).unwrap();
        assert_eq!(hit.tag, CaseTag::Case4);
        assert_eq!(hit.q, Some(BigInt::from(4921)));

        let c8 = classify_case(&cubic(0, 0, -2)).unwrap();
        assert_eq!(c8.tag, CaseTag::Case8);
        assert_eq!(c8.delta, BigInt::from(-108));

        // Δ = −175 = −7·5²
        let c3 = classify_case(&cubic(0, -5, 5)).unwrap();
        assert_eq!(c3.tag, CaseTag::Case3);
        assert_eq!(c3.q, Some(BigInt::from(5)));

        assert!(matches!(
            classify_case(&cubic(1, 0, 1)),
            Err(Error::NonDepressed(_))
        ));
        assert!(matches!(
            classify_case(&cubic(0, 0, 0)),
            Err(Error::ZeroDiscriminant)
        ));
        assert!(matches!(
            classify_case(&cubic(0, -1, 0)),
            Err(Error::Reducible(_))
        ));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(cubic(0, -7, 7).to_string(), "x^3 - 7x + 7");
        assert_eq!(cubic(1, -2, -1).to_string(), "x^3 + x^2 - 2x - 1");
        assert_eq!(cubic(0, 0, 0).to_string(), "x^3");
        assert_eq!("0 -5 5".parse::<MonicCubic>().unwrap(), cubic(0, -5, 5));
        assert_eq!("1,-2,-1".parse::<MonicCubic>().unwrap(), cubic(1, -2, -1));
        assert!("1 2".parse::<MonicCubic>().is_err());
    }

    proptest! {
        #[test]
        fn depressed_discriminant_matches_short_formula(b in -10_000i64..10_000, c in -10_000i64..10_000) {
            let d = discriminant(&cubic(0, b, c));
            let short = BigInt::from(-4) * BigInt::from(b).pow(3) - BigInt::from(27) * BigInt::from(c).pow(2);
            prop_assert_eq!(d, short);
        }

        #[test]
        fn classification_reconstructs(b in -3000i64..3000, c in -3000i64..3000) {
            let f = cubic(0, b, c);
            if let Ok(case) = classify_case(&f) {
                prop_assert!(case.is_consistent());
                prop_assert_eq!(case.delta, discriminant(&f));
            }
        }
    }
}
