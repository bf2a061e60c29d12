//! End-to-end certification of a cubic: hypotheses, local solvability,
//! a bounded rational point search, and the resulting certificate.

mod emit;
mod rational;

pub use emit::{emit, local_report_json, validate, validate_json};
pub use rational::{is_rational_point, rational_point_search};

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::config::{Config, OutputFormat};
use crate::cubic::{
    check_condition_v, check_conditions, classify_case, discriminant, is_irreducible,
    ConditionReport, ConditionStatus, ConditionV, MonicCubic, TwistCase,
};
use crate::localsolve::{local_report, LocalOptions, LocalReport, LocalStatus};
use crate::quartic::{twist_from_cubic, QuarticForm};

/// Citations the certificate rests on in place of a global computation.
pub const ASSUMPTIONS: [&str; 2] = [
    "trusted theorem: a twist of the Klein quartic built from a cubic satisfying (i)-(v) has no rational points; \
     global non-existence is not recomputed",
    "finiteness of the checked hypotheses: splitting fields compared up to prime_bound, lifting trees cut at \
     depth_cap, rational search limited to height_bound",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertStatus {
    CounterexampleCertified,
    Failed(String),
    Unknown(String),
}

impl CertStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            CertStatus::CounterexampleCertified => "counterexample_certified",
            CertStatus::Failed(_) => "failed",
            CertStatus::Unknown(_) => "unknown",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            CertStatus::CounterexampleCertified => None,
            CertStatus::Failed(r) | CertStatus::Unknown(r) => Some(r),
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, CertStatus::CounterexampleCertified)
    }
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason() {
            Some(r) => write!(f, "{} ({r})", self.tag()),
            None => f.write_str(self.tag()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSearch {
    pub bound: u64,
    pub found: Option<[BigInt; 3]>,
}

/// Stages that did not run are `None`: each stage runs only while nothing
/// before it has failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub cubic: MonicCubic,
    pub case: Option<TwistCase>,
    pub quartic: Option<QuarticForm>,
    pub conditions: Option<ConditionReport>,
    pub condition_v: Option<ConditionV>,
    pub local: Option<LocalReport>,
    pub rational_search: Option<RationalSearch>,
    pub status: CertStatus,
    pub assumptions: Vec<String>,
}

impl Certificate {
    fn failed(cubic: &MonicCubic, reason: impl Into<String>) -> Certificate {
        Certificate {
            cubic: cubic.clone(),
            case: None,
            quartic: None,
            conditions: None,
            condition_v: None,
            local: None,
            rational_search: None,
            status: CertStatus::Failed(reason.into()),
            assumptions: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        emit(self, OutputFormat::Text)
    }

    pub fn to_json(&self) -> String {
        emit(self, OutputFormat::Json)
    }
}

fn first_condition_with(
    conditions: &ConditionReport,
    condition_v: &ConditionV,
    status: ConditionStatus,
) -> Option<&'static str> {
    conditions
        .all()
        .into_iter()
        .map(|(name, c)| (name, c.status))
        .chain([("v", condition_v.status)])
        .find(|(_, s)| *s == status)
        .map(|(name, _)| name)
}

/// Runs every check on `f` and assembles the certificate.
///
/// The status is the first failure in the order: reducibility, conditions
/// (i)-(v), local solvability, rational search. Otherwise it is unknown when
/// any step is undecided, and certified when none is.
pub fn certify(f: &MonicCubic, config: &Config) -> Certificate {
    if !f.is_depressed() {
        return Certificate::failed(f, format!("non-depressed cubic (A = {})", f.a));
    }
    if discriminant(f).is_zero() || !is_irreducible(f) {
        return Certificate::failed(f, "reducible");
    }
    let case = match classify_case(f) {
        Ok(case) => case,
        Err(e) => return Certificate::failed(f, e.to_string()),
    };
    let quartic = match twist_from_cubic(f) {
        Ok(q) => q,
        Err(e) => return Certificate::failed(f, e.to_string()),
    };
    let conditions = match check_conditions(f, config.factor_budget) {
        Ok(c) => c,
        Err(e) => return Certificate::failed(f, e.to_string()),
    };
    let condition_v = check_condition_v(
        f,
        config.prime_bound,
        config.reference_sextic_cubic.as_ref(),
        config.condition_v_reading,
    );
    let mut cert = Certificate {
        case: Some(case),
        quartic: Some(quartic.clone()),
        conditions: Some(conditions),
        condition_v: Some(condition_v),
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        ..Certificate::failed(f, "")
    };
    let (conditions, condition_v) = (
        cert.conditions.as_ref().unwrap(),
        cert.condition_v.as_ref().unwrap(),
    );
    if let Some(name) = first_condition_with(conditions, condition_v, ConditionStatus::Fail) {
        cert.status = CertStatus::Failed(format!("condition ({name})"));
        return cert;
    }
    let mut unknown: Vec<String> = Vec::new();
    if let Some(name) = first_condition_with(conditions, condition_v, ConditionStatus::Unknown) {
        unknown.push(format!("condition ({name}) undecided"));
    }

    let options = LocalOptions {
        depth_cap: config.depth_cap,
        factor_budget: config.factor_budget,
    };
    let local = match local_report(f, &options) {
        Ok(r) => r,
        Err(e) => {
            cert.status = CertStatus::Failed(e.to_string());
            return cert;
        }
    };
    let empty = local
        .values()
        .find(|v| v.status.is_empty())
        .map(|v| v.place.to_string());
    let inconclusive: Vec<String> = local
        .values()
        .filter(|v| matches!(v.status, LocalStatus::Inconclusive { .. }))
        .map(|v| v.place.to_string())
        .collect();
    cert.local = Some(local);
    if let Some(place) = empty {
        cert.status = CertStatus::Failed(format!("no local point at {place}"));
        return cert;
    }
    if !inconclusive.is_empty() {
        unknown.push(format!(
            "local solvability undecided at {}",
            inconclusive.join(", ")
        ));
    }

    let found = rational_point_search(&quartic, config.height_bound);
    let has_point = found.is_some();
    cert.rational_search = Some(RationalSearch {
        bound: config.height_bound,
        found,
    });
    cert.status = if has_point {
        CertStatus::Failed("rational point exists".into())
    } else if !unknown.is_empty() {
        CertStatus::Unknown(unknown.join("; "))
    } else {
        CertStatus::CounterexampleCertified
    };
    cert
}
