use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::univariate::real_roots;
use super::{LocalStatus, LocalVerdict, Place, Witness};
use crate::quartic::{QuarticForm, MONOMIALS};

const BISECTION_TOL: f64 = 1e-10;

/// `F(x, second, third)` as a polynomial in `x`.
fn restrict(coeffs: &[f64; 15], second: f64, third: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    for (c, [i, j, k]) in coeffs.iter().zip(MONOMIALS) {
        out[i as usize] += c * second.powi(j as i32) * third.powi(k as i32);
    }
    out
}

/// Finds a real point on `F = 0`: coordinate points first, then the pencils
/// `(x : t : 1)`, `(x : 1 : t)` and `(x : 1 : 0)` over a grid `t = u/8`,
/// `u ∈ [−64, 64]`, refined twice by a factor 4.
pub fn real_solvable(form: &QuarticForm) -> LocalVerdict {
    let verdict = |status, work| LocalVerdict {
        place: Place::Real,
        status,
        work,
        method: "real pencil search",
    };
    let mut work = 0u64;
    for axis in 0..3 {
        let mut pt: [BigInt; 3] = Default::default();
        pt[axis] = 1.into();
        work += 1;
        if form.evaluate(&pt, None).is_zero() {
            let coords = std::array::from_fn(|i| if i == axis { 1.0 } else { 0.0 });
            return verdict(
                LocalStatus::HasPoint(Witness::Real {
                    coords,
                    exact: true,
                }),
                work,
            );
        }
    }
    let coeffs: [f64; 15] =
        std::array::from_fn(|i| form.coefficients()[i].to_f64().unwrap_or(f64::NAN));
    // rescale to keep powers of large coefficients finite
    let big = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let coeffs = coeffs.map(|c| c / big);

    let mut lines: Vec<(f64, f64)> = vec![(1.0, 0.0)];
    for refinement in [8.0f64, 32.0, 128.0] {
        let span = (8.0 * refinement) as i64;
        for u in -span..=span {
            let t = u as f64 / refinement;
            lines.push((t, 1.0));
            lines.push((1.0, t));
        }
        for (second, third) in lines.drain(..) {
            work += 1;
            let poly = restrict(&coeffs, second, third);
            if let Some(&x) = real_roots(&poly, BISECTION_TOL).first() {
                let coords = [x, second, third];
                return verdict(
                    LocalStatus::HasPoint(Witness::Real {
                        coords,
                        exact: false,
                    }),
                    work,
                );
            }
        }
    }
    let reason = "no real root on the search grid".to_string();
    verdict(LocalStatus::Inconclusive { reason }, work)
}
