//! Explicit twists of the Klein quartic `X³Y + Y³Z + Z³X = 0` attached to
//! integer cubics `x³ + Bx + C`, together with the machinery needed to decide
//! whether such a twist is a counterexample to the Hasse principle:
//! local solvability over ℝ and every ℚ_p, Frobenius-trace consistency checks,
//! a search over a conjectural infinite family, and certificate emission.
//!
//! Global non-existence of rational points is not recomputed. Certificates
//! carry it as an explicit assumption alongside a bounded point search.

pub mod arith;
pub mod certify;
pub mod config;
pub mod cubic;
pub mod error;
pub mod localsolve;
pub mod projective;
pub mod quartic;
pub mod search;
pub mod tracecheck;

pub use error::{Error, Result};

/// Version string embedded in emitted certificates.
pub const TOOL_VERSION: &str = concat!("klein-hasse ", env!("CARGO_PKG_VERSION"));
