use crate::projective::ProjectivePoints;
use crate::quartic::QuarticForm;

/// Number of points of `F = 0` in P²(𝔽_p).
pub fn count_points_fp(form: &QuarticForm, p: u64) -> u64 {
    let f = form.reduce_mod(p);
    ProjectivePoints::new(p)
        .filter(|&pt| f.eval(pt) == 0)
        .count() as u64
}

/// 𝔽_p-points of `F = 0` where the gradient does not vanish, in enumeration order.
pub fn smooth_fp_points(form: &QuarticForm, p: u64) -> Vec<[u64; 3]> {
    let f = form.reduce_mod(p);
    ProjectivePoints::new(p)
        .filter(|&pt| f.eval(pt) == 0 && f.gradient(pt) != [0, 0, 0])
        .collect()
}
