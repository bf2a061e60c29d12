use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use super::{is_rational_point, CertStatus, Certificate};
use crate::config::OutputFormat;
use crate::cubic::ConditionStatus;
use crate::localsolve::{LocalReport, LocalStatus, LocalVerdict, Witness};
use crate::quartic::QuarticForm;
use crate::{Error, Result, TOOL_VERSION};

#[derive(Serialize)]
struct CubicJson {
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
    #[serde(rename = "C")]
    c: String,
}

#[derive(Serialize)]
struct CaseJson {
    tag: &'static str,
    q: Option<String>,
    delta: String,
}

#[derive(Serialize)]
struct ConditionJson {
    status: ConditionStatus,
    evidence: Vec<String>,
}

#[derive(Serialize)]
struct ConditionsJson {
    i: ConditionJson,
    ii: ConditionJson,
    iii: ConditionJson,
    iv: ConditionJson,
    v: ConditionJson,
}

#[derive(Serialize)]
struct LocalJson {
    place: String,
    status: &'static str,
    witness: Option<String>,
    level: Option<u32>,
    method: &'static str,
}

#[derive(Serialize)]
struct SearchJson {
    bound: u64,
    found: Option<[String; 3]>,
}

#[derive(Serialize)]
struct CertificateJson {
    cubic: CubicJson,
    case: Option<CaseJson>,
    quartic: Option<Vec<String>>,
    conditions: Option<ConditionsJson>,
    local: Option<Vec<LocalJson>>,
    rational_search: Option<SearchJson>,
    status: &'static str,
    reason: Option<String>,
    assumptions: Vec<String>,
    tool_version: &'static str,
}

fn verdict_json(v: &LocalVerdict) -> LocalJson {
    let (witness, level) = match &v.status {
        LocalStatus::HasPoint(w @ Witness::PAdic { precision, .. }) => {
            (Some(w.to_string()), Some(*precision))
        }
        LocalStatus::HasPoint(w) => (Some(w.to_string()), None),
        LocalStatus::Empty { level } => (None, Some(*level)),
        LocalStatus::Inconclusive { reason } => (Some(reason.clone()), None),
    };
    LocalJson {
        place: v.place.to_string(),
        status: v.status.tag(),
        witness,
        level,
        method: v.method,
    }
}

/// The `local` array of the certificate schema.
pub fn local_report_json(report: &LocalReport) -> Value {
    let entries: Vec<LocalJson> = report.values().map(verdict_json).collect();
    serde_json::to_value(entries).expect("local report serializes")
}

fn to_json_doc(cert: &Certificate) -> CertificateJson {
    let conditions = cert
        .conditions
        .as_ref()
        .zip(cert.condition_v.as_ref())
        .map(|(c, v)| {
            let plain = |c: &crate::cubic::Condition| ConditionJson {
                status: c.status,
                evidence: vec![c.evidence.clone()],
            };
            ConditionsJson {
                i: plain(&c.odd_c),
                ii: plain(&c.b_prime_to_3),
                iii: plain(&c.seven_exact),
                iv: plain(&c.other_primes),
                v: ConditionJson {
                    status: v.status,
                    evidence: std::iter::once(format!("reading: {}", v.reading.as_str()))
                        .chain(v.selected().into_iter().map(|r| r.evidence.clone()))
                        .collect(),
                },
            }
        });
    CertificateJson {
        cubic: CubicJson {
            a: cert.cubic.a.to_string(),
            b: cert.cubic.b.to_string(),
            c: cert.cubic.c.to_string(),
        },
        case: cert.case.as_ref().map(|c| CaseJson {
            tag: c.tag.as_str(),
            q: c.q.as_ref().map(BigInt::to_string),
            delta: c.delta.to_string(),
        }),
        quartic: cert
            .quartic
            .as_ref()
            .map(|q| q.coefficients().iter().map(BigInt::to_string).collect()),
        conditions,
        local: cert
            .local
            .as_ref()
            .map(|l| l.values().map(verdict_json).collect()),
        rational_search: cert.rational_search.as_ref().map(|s| SearchJson {
            bound: s.bound,
            found: s
                .found
                .as_ref()
                .map(|p| p.each_ref().map(BigInt::to_string)),
        }),
        status: cert.status.tag(),
        reason: cert.status.reason().map(String::from),
        assumptions: cert.assumptions.clone(),
        tool_version: TOOL_VERSION,
    }
}

fn to_text(cert: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "cubic        {}", cert.cubic);
    if let Some(case) = &cert.case {
        let q = case.q.as_ref().map_or("-".to_string(), BigInt::to_string);
        let _ = writeln!(
            out,
            "case         {} (q = {q}, delta = {})",
            case.tag.as_str(),
            case.delta
        );
    }
    if let Some(q) = &cert.quartic {
        let _ = writeln!(out, "quartic      {}", q.to_text());
    }
    if let (Some(c), Some(v)) = (&cert.conditions, &cert.condition_v) {
        for (name, cond) in c.all() {
            let _ = writeln!(
                out,
                "({name:<3})        {:<8} {}",
                cond.status.to_string(),
                cond.evidence
            );
        }
        let _ = writeln!(
            out,
            "(v)          {:<8} reading {}",
            v.status.to_string(),
            v.reading.as_str()
        );
        for r in v.selected() {
            let _ = writeln!(out, "               {}", r.evidence);
        }
    }
    if let Some(local) = &cert.local {
        let _ = writeln!(out, "local");
        for v in local.values() {
            let _ = writeln!(out, "  {v}");
        }
    }
    if let Some(s) = &cert.rational_search {
        let found = match &s.found {
            Some([x, y, z]) => format!("({x}:{y}:{z})"),
            None => "none".into(),
        };
        let _ = writeln!(out, "rational     height <= {}: {found}", s.bound);
    }
    let _ = writeln!(out, "status       {}", cert.status);
    for a in &cert.assumptions {
        let _ = writeln!(out, "assumption   {a}");
    }
    let _ = writeln!(out, "tool         {TOOL_VERSION}");
    out
}

/// Deterministic serialization of a certificate.
pub fn emit(cert: &Certificate, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => to_text(cert),
        OutputFormat::Json => {
            let mut s =
                serde_json::to_string_pretty(&to_json_doc(cert)).expect("certificate serializes");
            s.push('\n');
            s
        }
    }
}

fn check(problems: Vec<String>) -> Result<()> {
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "invalid certificate: {}",
            problems.join("; ")
        )))
    }
}

/// Checks the certificate invariants on the in-memory structure.
pub fn validate(cert: &Certificate) -> Result<()> {
    let mut problems = Vec::new();
    if let Some(pt) = cert.rational_search.as_ref().and_then(|s| s.found.as_ref()) {
        if cert.status != CertStatus::Failed("rational point exists".into()) {
            problems.push("rational point found but status is not failed".into());
        }
        if !cert
            .quartic
            .as_ref()
            .is_some_and(|q| is_rational_point(q, pt))
        {
            problems.push("reported rational point is not a primitive zero".into());
        }
    }
    if cert.status.is_certified() {
        match (&cert.conditions, &cert.condition_v) {
            (Some(c), Some(v)) => {
                if c.all()
                    .iter()
                    .any(|(_, c)| c.status != ConditionStatus::Pass)
                    || v.status != ConditionStatus::Pass
                {
                    problems.push("certified with a condition not passing".into());
                }
            }
            _ => problems.push("certified without conditions".into()),
        }
        match &cert.local {
            Some(l) if l.values().all(|v| v.status.has_point()) => {}
            _ => problems.push("certified without a local point at every place".into()),
        }
        match &cert.rational_search {
            Some(s) if s.found.is_none() => {}
            _ => problems.push("certified without a completed rational search".into()),
        }
        if cert.assumptions.is_empty() {
            problems.push("certified without assumptions".into());
        }
    }
    check(problems)
}

/// Re-reads an emitted JSON certificate and checks the same invariants,
/// re-evaluating the quartic at any reported rational point.
pub fn validate_json(doc: &str) -> Result<()> {
    let v: Value = serde_json::from_str(doc).map_err(|e| Error::Parse(e.to_string()))?;
    let mut problems = Vec::new();
    let status = v["status"].as_str().unwrap_or_default();
    if let Some(found) = v["rational_search"]["found"].as_array() {
        if status != "failed" || v["reason"] != "rational point exists" {
            problems.push("rational point found but status is not failed".into());
        }
        let coeffs: Option<Vec<BigInt>> = v["quartic"]
            .as_array()
            .map(|a| a.iter().filter_map(|c| c.as_str()?.parse().ok()).collect());
        let pt: Vec<BigInt> = found
            .iter()
            .filter_map(|c| c.as_str()?.parse().ok())
            .collect();
        let form = coeffs
            .and_then(|c| <[BigInt; 15]>::try_from(c).ok())
            .and_then(|c| QuarticForm::new(c, "").ok());
        let vanishes = match (form, <[BigInt; 3]>::try_from(pt)) {
            (Some(form), Ok(pt)) => is_rational_point(&form, &pt),
            _ => false,
        };
        if !vanishes {
            problems.push("reported rational point is not a primitive zero".into());
        }
    }
    if status == "counterexample_certified" {
        let conds = ["i", "ii", "iii", "iv", "v"];
        if !conds.iter().all(|c| v["conditions"][c]["status"] == "pass") {
            problems.push("certified with a condition not passing".into());
        }
        let local_ok = v["local"]
            .as_array()
            .is_some_and(|l| !l.is_empty() && l.iter().all(|e| e["status"] == "has_point"));
        if !local_ok {
            problems.push("certified without a local point at every place".into());
        }
        if !v["rational_search"].is_object() || !v["rational_search"]["found"].is_null() {
            problems.push("certified without a completed rational search".into());
        }
        if v["assumptions"].as_array().is_none_or(Vec::is_empty) {
            problems.push("certified without assumptions".into());
        }
    }
    check(problems)
}
