//! Local solvability of plane quartics over ℝ and ℚ_p.

mod fp;
mod padic;
mod real;
mod report;
mod sweep;
pub(crate) mod univariate;

pub use fp::{count_points_fp, smooth_fp_points};
pub use padic::{hensel_refine, qp_solvable, DEFAULT_DEPTH_CAP};
pub use real::real_solvable;
pub use report::{local_report, LocalOptions, LocalReport};
pub use sweep::{verify_prime_sweep, SweepEntry, SweepReport};

use std::fmt;

use num_bigint::{BigInt, BigUint};

/// A completion of ℚ, or an aggregate of primes handled by one argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(BigUint),
    /// Every prime `≥ from` of good reduction not listed separately.
    GoodPrimesFrom(u64),
    /// A composite part of `Δ` whose prime factors are unknown.
    Unfactored(BigUint),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("R"),
            Place::Prime(p) => write!(f, "Q_{p}"),
            Place::GoodPrimesFrom(p) => write!(f, "Q_p, good p >= {p}"),
            Place::Unfactored(n) => write!(f, "primes of {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Primitive integer triple with `F ≡ 0 mod p^precision` meeting the Hensel criterion.
    PAdic {
        coords: [BigInt; 3],
        precision: u32,
        level: u32,
    },
    /// Real point; `exact` when `F` vanishes exactly at integer coordinates.
    Real { coords: [f64; 3], exact: bool },
    /// Hasse–Weil bound for smooth reductions of genus 3.
    HasseWeil { from: u64 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::PAdic {
                coords: [x, y, z],
                precision,
                level,
            } => {
                write!(f, "({x}:{y}:{z}) mod p^{precision}, level {level}")
            }
            Witness::Real {
                coords: [x, y, z],
                exact,
            } => {
                if *exact {
                    write!(f, "({x}:{y}:{z}) exact")
                } else {
                    write!(f, "({x:.12}:{y:.12}:{z:.12})")
                }
            }
            Witness::HasseWeil { from } => write!(f, "(p+1)^2 > 36p for p >= {from}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalStatus {
    HasPoint(Witness),
    /// No residue class survives at this level of the lifting tree.
    Empty {
        level: u32,
    },
    Inconclusive {
        reason: String,
    },
}

impl LocalStatus {
    pub fn has_point(&self) -> bool {
        matches!(self, LocalStatus::HasPoint(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, LocalStatus::Empty { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            LocalStatus::HasPoint(_) => "has_point",
            LocalStatus::Empty { .. } => "empty",
            LocalStatus::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalVerdict {
    pub place: Place,
    pub status: LocalStatus,
    /// Residue points examined.
    pub work: u64,
    /// Which argument produced the verdict.
    pub method: &'static str,
}

impl fmt::Display for LocalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            LocalStatus::HasPoint(w) => {
                write!(f, "{}: has point {w} [{}]", self.place, self.method)
            }
            LocalStatus::Empty { level } => write!(
                f,
                "{}: empty at level {level} [{}]",
                self.place, self.method
            ),
            LocalStatus::Inconclusive { reason } => {
                write!(
                    f,
                    "{}: inconclusive ({reason}) [{}]",
                    self.place, self.method
                )
            }
        }
    }
}

/// `(p + 1)² > 36p`, i.e. `p + 1 > 2g√p` with `g = 3`.
pub fn hasse_weil_nonempty(p: u64) -> bool {
    let p = p as u128;
    (p + 1) * (p + 1) > 36 * p
}
