use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::conditions::ConditionStatus;
use super::{discriminant, roots_numeric, MonicCubic};
use crate::arith::{exact_square_root, mod_floor_u64, primes_below};

/// `x³ + x² − 2x − 1`, the cubic subfield of ℚ(ζ₇).
pub fn reference_cyclotomic_cubic() -> MonicCubic {
    MonicCubic::new(1, -2, -1)
}

/// `x³ − 5x + 5`: discriminant −7·5², its splitting field is the sextic field of
/// discriminant −7³·5⁴ (ring class field of conductor 5 over ℚ(√−7)).
pub fn reference_sextic_cubic() -> MonicCubic {
    MonicCubic::new(0, -5, 5)
}

/// Degrees of the irreducible factors mod an unramified prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// {1, 1, 1}
    Split,
    /// {1, 2}
    LinearQuadratic,
    /// {3}
    Inert,
}

/// Factorization shape of `f` mod `p`, assuming `p ∤ disc(f)`.
pub fn factorization_shape(f: &MonicCubic, p: u64) -> Shape {
    let (a, b, c) = (
        mod_floor_u64(&f.a, p),
        mod_floor_u64(&f.b, p),
        mod_floor_u64(&f.c, p),
    );
    let m = p as u128;
    let roots = (0..p)
        .filter(|&x| {
            let x = x as u128;
            let v = (((x + a as u128) % m * x + b as u128) % m * x + c as u128) % m;
            v == 0
        })
        .take(2)
        .count();
    match roots {
        0 => Shape::Inert,
        1 => Shape::LinearQuadratic,
        _ => Shape::Split,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DifferenceWitness {
    /// `disc(f)·disc(g)` is not a square, so the quadratic resolvents differ.
    DiscriminantClass,
    /// Smallest unramified prime with different factorization shapes.
    Prime(u64),
}

/// Proof that the two cubics define conjugate fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SameEvidence {
    Identical,
    /// `root_of(u₀ + u₁θ + u₂θ²) = 0` where `θ` is a root of `base`.
    Embedding {
        root_of: MonicCubic,
        base: MonicCubic,
        coefficients: [BigRational; 3],
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplittingComparison {
    Same(SameEvidence),
    Different(DifferenceWitness),
    IndistinguishableUpToBound { primes_checked: usize },
}

impl fmt::Display for SplittingComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplittingComparison::Same(SameEvidence::Identical) => f.write_str("same (identical)"),
            SplittingComparison::Same(SameEvidence::Embedding {
                root_of,
                coefficients,
                ..
            }) => {
                let [u0, u1, u2] = coefficients;
                write!(
                    f,
                    "same ({u0} + ({u1})t + ({u2})t^2 is a root of {root_of})"
                )
            }
            SplittingComparison::Different(DifferenceWitness::DiscriminantClass) => {
                f.write_str("different (discriminants differ by a non-square)")
            }
            SplittingComparison::Different(DifferenceWitness::Prime(p)) => {
                write!(f, "different (factorization shapes differ mod {p})")
            }
            SplittingComparison::IndistinguishableUpToBound { primes_checked } => {
                write!(
                    f,
                    "indistinguishable ({primes_checked} primes agree, no embedding found)"
                )
            }
        }
    }
}

/// Compares the splitting fields of two irreducible cubics.
pub fn splitting_equals(f: &MonicCubic, g: &MonicCubic, prime_bound: u64) -> SplittingComparison {
    if f == g {
        return SplittingComparison::Same(SameEvidence::Identical);
    }
    let df = discriminant(f);
    let dg = discriminant(g);
    if exact_square_root(&(&df * &dg)).is_none() {
        return SplittingComparison::Different(DifferenceWitness::DiscriminantClass);
    }
    let primes: Vec<u64> = primes_below(prime_bound.saturating_add(1))
        .into_iter()
        .filter(|&p| mod_floor_u64(&df, p) != 0 && mod_floor_u64(&dg, p) != 0)
        .collect();
    let mismatch = primes
        .par_iter()
        .find_first(|&&p| factorization_shape(f, p) != factorization_shape(g, p));
    if let Some(&p) = mismatch {
        return SplittingComparison::Different(DifferenceWitness::Prime(p));
    }
    // express a root of the larger-discriminant cubic over the smaller one
    let (root_of, base) = if dg.abs() <= df.abs() { (f, g) } else { (g, f) };
    match find_embedding(root_of, base) {
        Some(coefficients) => SplittingComparison::Same(SameEvidence::Embedding {
            root_of: root_of.clone(),
            base: base.clone(),
            coefficients,
        }),
        None => SplittingComparison::IndistinguishableUpToBound {
            primes_checked: primes.len(),
        },
    }
}

/// Element of ℚ[θ]/(base(θ)) in the power basis.
type FieldElement = [BigRational; 3];

fn field_mul(x: &FieldElement, y: &FieldElement, base: &MonicCubic) -> FieldElement {
    let mut prod = vec![BigRational::zero(); 5];
    for i in 0..3 {
        for j in 0..3 {
            prod[i + j] += &x[i] * &y[j];
        }
    }
    let coefs = [
        BigRational::from_integer(base.c.clone()),
        BigRational::from_integer(base.b.clone()),
        BigRational::from_integer(base.a.clone()),
    ];
    // θ^k = −(a θ^{k−1} + b θ^{k−2} + c θ^{k−3}) for k = 4, 3
    for k in (3..5).rev() {
        let lead = std::mem::take(&mut prod[k]);
        if lead.is_zero() {
            continue;
        }
        for (offset, coef) in coefs.iter().enumerate() {
            prod[k - 3 + offset] -= &lead * coef;
        }
    }
    [prod[0].clone(), prod[1].clone(), prod[2].clone()]
}

fn evaluates_to_zero(f: &MonicCubic, x: &FieldElement, base: &MonicCubic) -> bool {
    // Horner: ((x + a)x + b)x + c
    let mut acc = x.clone();
    acc[0] += BigRational::from_integer(f.a.clone());
    acc = field_mul(&acc, x, base);
    acc[0] += BigRational::from_integer(f.b.clone());
    acc = field_mul(&acc, x, base);
    acc[0] += BigRational::from_integer(f.c.clone());
    acc.iter().all(Zero::is_zero)
}

fn det3(m: [[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Rational `(u₀, u₁, u₂)` with `f(u₀ + u₁θ + u₂θ²) = 0` in ℚ[θ]/(base), verified exactly.
///
/// Candidates come from interpolating the roots of `f` at the roots of `base`;
/// their denominators divide `disc(base)`.
fn find_embedding(f: &MonicCubic, base: &MonicCubic) -> Option<FieldElement> {
    let theta = roots_numeric(base).ok()?;
    let rho = roots_numeric(f).ok()?;
    let denom = discriminant(base).abs();
    let denom_f = denom.to_f64()?;
    let vandermonde = theta.map(|t| [Complex64::new(1.0, 0.0), t, t * t]);
    let det = det3(vandermonde);
    if det.norm() == 0.0 {
        return None;
    }
    for perm in PERMUTATIONS {
        let target = perm.map(|j| rho[j]);
        let mut coefficients: Vec<BigRational> = Vec::with_capacity(3);
        for col in 0..3 {
            let mut m = vandermonde;
            for (row, value) in target.iter().enumerate() {
                m[row][col] = *value;
            }
            let u = det3(m) / det;
            let scaled = u.re * denom_f;
            if !scaled.is_finite() || scaled.abs() > 2f64.powi(52) {
                return None;
            }
            let numer = BigInt::from(scaled.round() as i64);
            coefficients.push(BigRational::new(numer, denom.clone()));
        }
        let candidate: FieldElement = [
            coefficients[0].clone(),
            coefficients[1].clone(),
            coefficients[2].clone(),
        ];
        if evaluates_to_zero(f, &candidate, base) {
            return Some(candidate);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionVReading {
    /// Both the raw splitting field and its compositum with ℚ(√−7).
    Both,
    Raw,
    FieldOfDefinition,
}

impl ConditionVReading {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionVReading::Both => "both",
            ConditionVReading::Raw => "raw",
            ConditionVReading::FieldOfDefinition => "field_of_definition",
        }
    }
}

impl std::str::FromStr for ConditionVReading {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "both" => Ok(ConditionVReading::Both),
            "raw" => Ok(ConditionVReading::Raw),
            "field_of_definition" => Ok(ConditionVReading::FieldOfDefinition),
            _ => Err(crate::Error::Parse(format!(
                "unknown condition (v) reading `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadingVerdict {
    NotIsomorphic,
    Isomorphic,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldReading {
    pub verdict: ReadingVerdict,
    pub evidence: String,
}

impl FieldReading {
    fn from_comparison(cmp: &SplittingComparison, context: &str) -> Self {
        let verdict = match cmp {
            SplittingComparison::Same(_) => ReadingVerdict::Isomorphic,
            SplittingComparison::Different(_) => ReadingVerdict::NotIsomorphic,
            SplittingComparison::IndistinguishableUpToBound { .. } => ReadingVerdict::Undecided,
        };
        FieldReading {
            verdict,
            evidence: format!("{context}: {cmp}"),
        }
    }
}

/// Hypothesis (v) under both readings, against ℚ(ζ₇) and the reference sextic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionV {
    pub reading: ConditionVReading,
    pub cyclotomic_raw: FieldReading,
    pub cyclotomic_field_of_definition: FieldReading,
    pub sextic_raw: FieldReading,
    pub sextic_field_of_definition: FieldReading,
    pub status: ConditionStatus,
}

impl ConditionV {
    pub fn selected(&self) -> Vec<&FieldReading> {
        let raw = [&self.cyclotomic_raw, &self.sextic_raw];
        let fod = [
            &self.cyclotomic_field_of_definition,
            &self.sextic_field_of_definition,
        ];
        match self.reading {
            ConditionVReading::Raw => raw.to_vec(),
            ConditionVReading::FieldOfDefinition => fod.to_vec(),
            ConditionVReading::Both => raw.into_iter().chain(fod).collect(),
        }
    }
}

/// Evaluates hypothesis (v) for an irreducible cubic `f`.
///
/// `ℚ_f` has degree 3 when `Δ` is a square and is an S₃ extension otherwise,
/// so it is never isomorphic to the cyclic sextic ℚ(ζ₇). The compositum
/// `L = ℚ_f(√−7)` is isomorphic to ℚ(ζ₇) exactly when `f` defines the cubic
/// subfield of ℚ(ζ₇), and either field is isomorphic to the reference sextic
/// exactly when `f` defines the same cubic field as the reference cubic.
pub fn check_condition_v(
    f: &MonicCubic,
    prime_bound: u64,
    reference_sextic: Option<&MonicCubic>,
    reading: ConditionVReading,
) -> ConditionV {
    let cyclic = exact_square_root(&discriminant(f)).is_some();
    let cyclotomic_raw = FieldReading {
        verdict: ReadingVerdict::NotIsomorphic,
        evidence: if cyclic {
            "splitting field has degree 3, Q(zeta_7) has degree 6".into()
        } else {
            "splitting field has group S3, Q(zeta_7) is cyclic".into()
        },
    };
    let g0 = reference_cyclotomic_cubic();
    let cyclotomic_field_of_definition = FieldReading::from_comparison(
        &splitting_equals(f, &g0, prime_bound),
        &format!("L vs Q(zeta_7) via {g0}"),
    );
    let (sextic_raw, sextic_field_of_definition) = match reference_sextic {
        Some(r) => {
            let cmp = splitting_equals(f, r, prime_bound);
            (
                FieldReading::from_comparison(&cmp, &format!("splitting field vs closure of {r}")),
                FieldReading::from_comparison(&cmp, &format!("L vs closure of {r}")),
            )
        }
        None => {
            let missing = FieldReading {
                verdict: ReadingVerdict::Undecided,
                evidence: "indistinguishable: no reference_sextic_cubic configured".into(),
            };
            (missing.clone(), missing)
        }
    };
    let mut out = ConditionV {
        reading,
        cyclotomic_raw,
        cyclotomic_field_of_definition,
        sextic_raw,
        sextic_field_of_definition,
        status: ConditionStatus::Unknown,
    };
    let verdicts: Vec<ReadingVerdict> = out.selected().iter().map(|r| r.verdict).collect();
    out.status = if verdicts.contains(&ReadingVerdict::Isomorphic) {
        ConditionStatus::Fail
    } else if verdicts.iter().all(|v| *v == ReadingVerdict::NotIsomorphic) {
        ConditionStatus::Pass
    } else {
        ConditionStatus::Unknown
    };
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::is_irreducible;
    use proptest::prelude::*;

    fn cubic(a: i64, b: i64, c: i64) -> MonicCubic {
        MonicCubic::new(a, b, c)
    }

    #[test]
    fn identical_inputs_are_same() {
        let g = reference_cyclotomic_cubic();
        assert_eq!(
            splitting_equals(&g, &g, 100),
            SplittingComparison::Same(SameEvidence::Identical)
        );
    }

    #[test]
    fn cube_roots_of_two_and_sixteen() {
        match splitting_equals(&cubic(0, 0, -2), &cubic(0, 0, -16), 10_000) {
            SplittingComparison::Same(SameEvidence::Embedding { coefficients, .. }) => {
                // 16^(1/3) = 2·2^(1/3)
                assert_eq!(coefficients[1], BigRational::from_integer(2.into()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_example_generates_the_cyclotomic_cubic_field() {
        // x³ − 7x + 7 and x³ + x² − 2x − 1 both have discriminant 49 and the
        // same cubic field (the only cyclic cubic field of conductor 7).
        let cmp = splitting_equals(&cubic(0, -7, 7), &reference_cyclotomic_cubic(), 10_000);
        assert!(
            matches!(
                cmp,
                SplittingComparison::Same(SameEvidence::Embedding { .. })
            ),
            "{cmp:?}"
        );
    }

    #[test]
    fn different_cyclic_fields_are_separated_by_a_prime() {
        // conductor 9 field: x³ − 3x + 1, Δ = 81
        let cmp = splitting_equals(&cubic(0, -3, 1), &reference_cyclotomic_cubic(), 10_000);
        assert!(
            matches!(
                cmp,
                SplittingComparison::Different(DifferenceWitness::Prime(_))
            ),
            "{cmp:?}"
        );
        let cmp = splitting_equals(&cubic(0, 0, -2), &reference_cyclotomic_cubic(), 10_000);
        assert_eq!(
            cmp,
            SplittingComparison::Different(DifferenceWitness::DiscriminantClass)
        );
    }

    #[test]
    fn reference_sextic_cubic_matches_its_conjugates() {
        let r = reference_sextic_cubic();
        assert_eq!(discriminant(&r), BigInt::from(-175));
        // x ↦ −x gives x³ − 5x − 5, the same field
        let cmp = splitting_equals(&cubic(0, -5, -5), &r, 10_000);
        assert!(matches!(cmp, SplittingComparison::Same(_)), "{cmp:?}");
    }

    #[test]
    fn condition_v_on_family_member() {
        let f = cubic(0, -4921, 132_867);
        let v = check_condition_v(
            &f,
            10_000,
            Some(&reference_sextic_cubic()),
            ConditionVReading::Both,
        );
        assert_eq!(v.status, ConditionStatus::Pass);
        assert_eq!(v.cyclotomic_raw.verdict, ReadingVerdict::NotIsomorphic);
    }

    #[test]
    fn condition_v_fails_for_the_cyclotomic_field_under_the_compositum_reading() {
        let f = cubic(0, -7, 7);
        let raw = check_condition_v(
            &f,
            10_000,
            Some(&reference_sextic_cubic()),
            ConditionVReading::Raw,
        );
        assert_eq!(raw.status, ConditionStatus::Pass);
        let both = check_condition_v(
            &f,
            10_000,
            Some(&reference_sextic_cubic()),
            ConditionVReading::Both,
        );
        assert_eq!(both.status, ConditionStatus::Fail);
        assert_eq!(
            both.cyclotomic_field_of_definition.verdict,
            ReadingVerdict::Isomorphic
        );
    }

    #[test]
    fn missing_reference_is_undecided() {
        let v = check_condition_v(
            &cubic(0, -4921, 132_867),
            1000,
            None,
            ConditionVReading::Both,
        );
        assert_eq!(v.sextic_raw.verdict, ReadingVerdict::Undecided);
        assert_eq!(v.status, ConditionStatus::Unknown);
    }

    #[test]
    fn cyclic_cubics_never_show_shape_one_two() {
        for f in [
            cubic(0, -7, 7),
            cubic(1, -2, -1),
            cubic(0, -3, 1),
            cubic(0, -4921, 132_867),
        ] {
            let d = discriminant(&f);
            for p in primes_below(1000) {
                if mod_floor_u64(&d, p) != 0 {
                    assert_ne!(
                        factorization_shape(&f, p),
                        Shape::LinearQuadratic,
                        "{f} mod {p}"
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn comparison_is_symmetric(b1 in -30i64..30, c1 in -30i64..30, b2 in -30i64..30, c2 in -30i64..30) {
            let f = cubic(0, b1, c1);
            let g = cubic(0, b2, c2);
            prop_assume!(is_irreducible(&f) && is_irreducible(&g));
            let fg = splitting_equals(&f, &g, 2000);
            let gf = splitting_equals(&g, &f, 2000);
            prop_assert_eq!(std::mem::discriminant(&fg), std::mem::discriminant(&gf));
            if let (SplittingComparison::Different(a), SplittingComparison::Different(b)) = (&fg, &gf) {
                prop_assert_eq!(a, b);
            }
            prop_assert!(matches!(splitting_equals(&f, &f, 2000), SplittingComparison::Same(_)));
        }
    }
}
