use std::cmp::Ordering;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::{discriminant, MonicCubic};
use crate::{Error, Result};

fn to_f64(x: &num_bigint::BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn eval(coefs: [f64; 3], z: Complex64) -> Complex64 {
    ((z + coefs[0]) * z + coefs[1]) * z + coefs[2]
}

fn eval_derivative(coefs: [f64; 3], z: Complex64) -> Complex64 {
    (z * 3.0 + 2.0 * coefs[0]) * z + coefs[1]
}

fn polish(coefs: [f64; 3], mut z: Complex64) -> Complex64 {
    for _ in 0..6 {
        let d = eval_derivative(coefs, z);
        if d.norm() == 0.0 {
            break;
        }
        let step = eval(coefs, z) / d;
        z -= step;
        if step.norm() <= f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    z
}

pub(crate) fn canonical_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Complex roots of a squarefree cubic, sorted by real part then imaginary part.
pub fn roots_numeric(f: &MonicCubic) -> Result<[Complex64; 3]> {
    if discriminant(f).is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    let coefs = [to_f64(&f.a), to_f64(&f.b), to_f64(&f.c)];
    let [a, b, c] = coefs;
    // x = t − a/3 gives t³ + pt + q
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);

    let mut roots: Vec<Complex64> = if disc > 0.0 && p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| {
                let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
                Complex64::new(t - shift, 0.0)
            })
            .collect()
    } else {
        // one real root by Cardano, the conjugate pair by deflation
        let inner = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        let u = (-q / 2.0 + if q <= 0.0 { inner } else { -inner }).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        let r = polish(coefs, Complex64::new(t - shift, 0.0)).re;
        // x² + (a + r)x + (b + r(a + r)) is the cofactor
        let s = a + r;
        let prod = if r.abs() > 1.0 { -c / r } else { b + r * s };
        let half = -s / 2.0;
        let rad = half * half - prod;
        if rad >= 0.0 {
            let sq = rad.sqrt();
            vec![
                Complex64::new(r, 0.0),
                Complex64::new(half + sq, 0.0),
                Complex64::new(half - sq, 0.0),
            ]
        } else {
            let sq = (-rad).sqrt();
            vec![
                Complex64::new(r, 0.0),
                Complex64::new(half, sq),
                Complex64::new(half, -sq),
            ]
        }
    };
    for z in roots.iter_mut() {
        let im = z.im;
        *z = polish(coefs, *z);
        if im == 0.0 {
            z.im = 0.0;
        }
    }
    roots.sort_by(canonical_order);
    Ok([roots[0], roots[1], roots[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12 * b.norm().max(1.0)
    }

    #[test]
    fn split_cubic() {
        let r = roots_numeric(&MonicCubic::new(0, -1, 0)).unwrap();
        for (got, want) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!(close(*got, Complex64::new(want, 0.0)), "{got}");
        }
    }

    #[test]
    fn shifted_roots_of_unity() {
        let r = roots_numeric(&MonicCubic::new(0, 0, 1)).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!(close(r[0], Complex64::new(-1.0, 0.0)));
        assert!(close(r[1], Complex64::new(0.5, -h)));
        assert!(close(r[2], Complex64::new(0.5, h)));
    }

    #[test]
    fn totally_real_example() {
        let r = roots_numeric(&MonicCubic::new(0, -7, 7)).unwrap();
        assert!(r.iter().all(|z| z.im == 0.0));
        let sum: Complex64 = r.iter().sum();
        assert!(sum.norm() < 1e-12);
    }

    #[test]
    fn rejects_repeated_roots() {
        assert_eq!(
            roots_numeric(&MonicCubic::new(0, 0, 0)),
            Err(Error::ZeroDiscriminant)
        );
        assert_eq!(
            roots_numeric(&MonicCubic::new(0, -3, 2)),
            Err(Error::ZeroDiscriminant)
        );
    }

    proptest! {
        #[test]
        fn vieta_relations(a in -50i64..50, b in -2000i64..2000, c in -100_000i64..100_000) {
            let f = MonicCubic::new(a, b, c);
            prop_assume!(!discriminant(&f).is_zero());
            let r = roots_numeric(&f).unwrap();
            let scale = (a.abs().max(b.abs()).max(c.abs()) as f64).max(1.0);
            let sum: Complex64 = r.iter().sum();
            let prod = r[0] * r[1] * r[2];
            prop_assert!((sum + a as f64).norm() <= 1e-8 * scale);
            prop_assert!((prod + c as f64).norm() <= 1e-8 * scale);
            for z in r {
                let root_scale = 1.0 + z.norm();
                let residual = eval([a as f64, b as f64, c as f64], z).norm();
                prop_assert!(residual < 1e-9 * scale * root_scale.powi(3));
            }
        }
    }
}
