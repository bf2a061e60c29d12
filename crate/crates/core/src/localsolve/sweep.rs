use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::padic::qp_solvable;
use crate::arith::mod_floor_u64;
use crate::quartic::{monomial_index, twist_with_scalars, CaseScalars};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepEntry {
    pub b: u64,
    pub c: u64,
    /// `F/p² mod p` equals `y²(−3969c²xy − 441b²y² + 2646bcyz − 3969c²z²)`.
    pub identity_holds: bool,
    /// ℚ_p-point found by the lifting tree; `None` when `c ≡ 0` (not required).
    pub liftable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub p: u64,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn identity_failures(&self) -> Vec<&SweepEntry> {
        self.entries.iter().filter(|e| !e.identity_holds).collect()
    }

    pub fn lift_failures(&self) -> Vec<&SweepEntry> {
        self.entries
            .iter()
            .filter(|e| e.liftable == Some(false))
            .collect()
    }

    pub fn all_ok(&self) -> bool {
        self.identity_failures().is_empty() && self.lift_failures().is_empty()
    }
}

/// The displayed reduction `y²·(quadratic)` as residues in monomial order.
fn displayed_reduction(b: u64, c: u64, p: u64) -> [u64; 15] {
    let residue = |v: i128| v.rem_euclid(p as i128) as u64;
    let (b, c) = (b as i128, c as i128);
    let mut out = [0u64; 15];
    let mut set = |i, j, k, v: i128| out[monomial_index(i, j, k).expect("degree 4")] = residue(v);
    set(1, 3, 0, -3969 * c * c);
    set(0, 4, 0, -441 * b * b);
    set(0, 3, 1, 2646 * b * c);
    set(0, 2, 2, -3969 * c * c);
    out
}

fn sweep_entry(p: u64, b: u64, c: u64, depth_cap: u32) -> Result<SweepEntry> {
    let pb = BigInt::from(p);
    let big_b = &pb * b;
    let big_c = &pb * c;
    let delta: BigInt = BigInt::from(-4) * big_b.pow(3) - BigInt::from(27) * &big_c * &big_c;
    let scalars = CaseScalars {
        d2: delta.clone(),
        d4: &delta * &delta,
        ds: delta,
    };
    let displayed = displayed_reduction(b, c, p);
    let Some(form) = twist_with_scalars(&big_b, &big_c, &scalars, "sweep") else {
        return Ok(SweepEntry {
            b,
            c,
            identity_holds: displayed == [0; 15],
            liftable: None,
        });
    };
    let p2 = &pb * &pb;
    let depleted: Option<Vec<u64>> = form
        .coefficients()
        .iter()
        .map(|v| (v % &p2).is_zero().then(|| mod_floor_u64(&(v / &p2), p)))
        .collect();
    let identity_holds = depleted.is_some_and(|d| d[..] == displayed[..]);
    let liftable = if c == 0 {
        None
    } else {
        Some(qp_solvable(&form, p, depth_cap)?.status.has_point())
    };
    Ok(SweepEntry {
        b,
        c,
        identity_holds,
        liftable,
    })
}

/// Checks, for every `(b, c) ∈ 𝔽_p²` with `B = pb`, `C = pc` and the
/// `d = √Δ` normalization, the mod-`p` shape of `F/p²` and (for `c ≠ 0`)
/// the existence of a ℚ_p-point.
pub fn verify_prime_sweep(p: u64, depth_cap: u32) -> Result<SweepReport> {
    if p == 2 || p == 3 || !crate::arith::is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!(
            "sweep needs a prime other than 2 and 3, got {p}"
        )));
    }
    let pairs: Vec<(u64, u64)> = (0..p).flat_map(|b| (0..p).map(move |c| (b, c))).collect();
    let entries = pairs
        .par_iter()
        .map(|&(b, c)| sweep_entry(p, b, c, depth_cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { p, entries })
}
