use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};

use super::{monomial_index, QuarticForm};
use crate::cubic::{classify_case, roots_numeric, CaseTag, MonicCubic, TwistCase};
use crate::Result;

/// `(d², d⁴, d·√Δ)` for the three twist families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseScalars {
    pub d2: BigInt,
    pub d4: BigInt,
    pub ds: BigInt,
}

impl CaseScalars {
    pub fn from_case(case: &TwistCase) -> Self {
        match (case.tag, &case.q) {
            (CaseTag::Case3, Some(q)) => CaseScalars {
                d2: BigInt::from(-7),
                d4: BigInt::from(49),
                ds: BigInt::from(-7) * q,
            },
            (CaseTag::Case4, Some(q)) => CaseScalars {
                d2: BigInt::from(1),
                d4: BigInt::from(1),
                ds: q.clone(),
            },
            _ => CaseScalars {
                d2: case.delta.clone(),
                d4: &case.delta * &case.delta,
                ds: case.delta.clone(),
            },
        }
    }

    /// `D4 = D2²` and `DS² = D2·Δ`.
    pub fn is_consistent_with(&self, delta: &BigInt) -> bool {
        self.d4 == &self.d2 * &self.d2 && &self.ds * &self.ds == &self.d2 * delta
    }
}

/// The twist quartic for `x³ + Bx + C` with the given case scalars, or `None`
/// when every coefficient vanishes (`B = C = 0`).
pub fn twist_with_scalars(
    b: &BigInt,
    c: &BigInt,
    s: &CaseScalars,
    label: &str,
) -> Option<QuarticForm> {
    let b2 = b * b;
    let terms: [([u32; 3], BigInt); 12] = [
        ([4, 0, 0], BigInt::from(3) * &s.d4),
        ([2, 2, 0], BigInt::from(-63) * &s.d2 * b),
        ([2, 1, 1], BigInt::from(189) * &s.d2 * c),
        ([2, 0, 2], BigInt::from(21) * &s.d2 * &b2),
        ([1, 3, 0], BigInt::from(147) * &s.ds),
        ([1, 1, 2], BigInt::from(147) * &s.ds * b),
        ([1, 0, 3], BigInt::from(-147) * &s.ds * c),
        ([0, 4, 0], BigInt::from(-441) * &b2),
        ([0, 3, 1], BigInt::from(2646) * b * c),
        (
            [0, 2, 2],
            BigInt::from(147) * (BigInt::from(2) * &b2 * b - BigInt::from(27) * c * c),
        ),
        ([0, 1, 3], BigInt::from(-882) * &b2 * c),
        ([0, 0, 4], BigInt::from(-49) * &b2 * &b2),
    ];
    let mut coeffs: [BigInt; 15] = Default::default();
    for ([i, j, k], v) in terms {
        coeffs[monomial_index(i, j, k).expect("degree 4")] = v;
    }
    QuarticForm::new(coeffs, label).ok()
}

/// Explicit twist of the Klein quartic attached to an irreducible `x³ + Bx + C`.
pub fn twist_from_cubic(f: &MonicCubic) -> Result<QuarticForm> {
    let case = classify_case(f)?;
    let scalars = CaseScalars::from_case(&case);
    let label = format!("twist B={} C={} {}", f.b, f.c, case.tag.as_str());
    Ok(twist_with_scalars(&f.b, &f.c, &scalars, &label).expect("Δ ≠ 0 forces a nonzero form"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCheck {
    /// Determinant with the roots in the orientation that was reported.
    pub determinant: Complex64,
    /// Determinant with the roots in canonical sorted order.
    pub canonical_determinant: Complex64,
    /// `−21·DS`.
    pub expected: BigInt,
    /// True when the canonical order had to be replaced by an odd permutation.
    pub orientation_swapped: bool,
    pub pass: bool,
}

fn d_value(case: &TwistCase) -> Complex64 {
    match case.tag {
        CaseTag::Case3 => Complex64::new(0.0, 7f64.sqrt()),
        CaseTag::Case4 => Complex64::new(1.0, 0.0),
        CaseTag::Case8 => {
            let delta = case.delta.to_f64().unwrap_or(f64::NAN);
            Complex64::new(delta, 0.0).sqrt()
        }
    }
}

fn twist_matrix_determinant(d: Complex64, [a, b, g]: [Complex64; 3]) -> Complex64 {
    let m = [
        [d, -3.0 * a + 2.0 * b + g, a * b - 3.0 * b * g + 2.0 * a * g],
        [d, a - 3.0 * b + 2.0 * g, 2.0 * a * b + b * g - 3.0 * a * g],
        [d, 2.0 * a + b - 3.0 * g, -3.0 * a * b + 2.0 * b * g + a * g],
    ];
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Numerically checks that the change-of-variables matrix has determinant `−21·d·√Δ`.
///
/// Cyclic relabelings of the roots leave the determinant fixed and
/// transpositions negate it, so the identity can hold for one orientation
/// only. The canonical order is tried first; the reported determinant is the
/// orientation closer to the expected value and the canonical one is kept too.
pub fn twist_matrix_check(f: &MonicCubic, tolerance: f64) -> Result<MatrixCheck> {
    let case = classify_case(f)?;
    let scalars = CaseScalars::from_case(&case);
    let expected = BigInt::from(-21) * &scalars.ds;
    let target = Complex64::new(expected.to_f64().unwrap_or(f64::NAN), 0.0);
    let d = d_value(&case);
    let [r0, r1, r2] = roots_numeric(f)?;
    let canonical = twist_matrix_determinant(d, [r0, r1, r2]);
    let swapped = twist_matrix_determinant(d, [r0, r2, r1]);
    let orientation_swapped = (swapped - target).norm() < (canonical - target).norm();
    let determinant = if orientation_swapped {
        swapped
    } else {
        canonical
    };
    let scale = (BigInt::from(21) * scalars.ds.abs())
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let pass = (determinant - target).norm() < tolerance * scale;
    Ok(MatrixCheck {
        determinant,
        canonical_determinant: canonical,
        expected,
        orientation_swapped,
        pass,
    })
}
