//! Real roots of small real polynomials (coefficients constant term first).

fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn trim(c: &[f64]) -> &[f64] {
    let scale = c.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut n = c.len();
    while n > 0 && c[n - 1].abs() <= scale * 1e-300 {
        n -= 1;
    }
    &c[..n]
}

fn bisect(c: &[f64], mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = eval(c, lo);
    for _ in 0..200 {
        if hi - lo <= tol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = eval(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sorted real roots of the polynomial inside `[lo, hi]`, isolated between the
/// critical points and bisected to relative width `tol`. Roots of even
/// multiplicity are reported only when the polynomial is tiny there.
pub(crate) fn real_roots_in(c: &[f64], lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    let c = trim(c);
    match c.len() {
        0 | 1 => return Vec::new(),
        2 => {
            let r = -c[0] / c[1];
            return if (lo..=hi).contains(&r) {
                vec![r]
            } else {
                Vec::new()
            };
        }
        _ => {}
    }
    let deriv: Vec<f64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| k as f64 * a)
        .collect();
    let crit = real_roots_in(&deriv, lo, hi, tol);
    let mut knots = vec![lo];
    knots.extend(crit.iter().copied().filter(|x| *x > lo && *x < hi));
    knots.push(hi);
    let scale: f64 = c
        .iter()
        .map(|a| a.abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let mut roots: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval(c, a), eval(c, b));
        if fa == 0.0 {
            roots.push(a);
        } else if (fa < 0.0) != (fb < 0.0) && fb != 0.0 {
            roots.push(bisect(c, a, b, tol));
        }
    }
    if eval(c, hi) == 0.0 {
        roots.push(hi);
    }
    for x in crit {
        let mag = scale * (1.0 + x.abs()).powi(c.len() as i32 - 1);
        if eval(c, x).abs() <= 1e-12 * mag {
            roots.push(x);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= tol * (1.0 + a.abs()));
    roots
}

/// Cauchy bound on the absolute value of every root.
pub(crate) fn root_bound(c: &[f64]) -> f64 {
    let c = trim(c);
    let Some(&lead) = c.last() else { return 0.0 };
    1.0 + c[..c.len() - 1]
        .iter()
        .fold(0.0f64, |m, a| m.max((a / lead).abs()))
}

pub(crate) fn real_roots(c: &[f64], tol: f64) -> Vec<f64> {
    let r = root_bound(c);
    real_roots_in(c, -r, r, tol)
}
