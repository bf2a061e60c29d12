//! Acceptance suite: runs every criterion in sequence, prints one PASS/FAIL
//! line per criterion and exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use klein_hasse::arith::{valuation, DEFAULT_FACTOR_BUDGET};
use klein_hasse::certify::{rational_point_search, validate_json};
use klein_hasse::cubic::{classify_case, CaseTag, MonicCubic};
use klein_hasse::localsolve::{
    count_points_fp, hasse_weil_nonempty, qp_solvable, verify_prime_sweep, DEFAULT_DEPTH_CAP,
};
use klein_hasse::quartic::{twist_from_cubic, twist_matrix_check, QuarticForm, MONOMIALS};
use klein_hasse::search::{family_n, is_excluded, search};
use klein_hasse::tracecheck::{allowed_traces, trace_sweep};

/// The three published cubics `x³ + Bx + |C|`; both signs of `C` are used.
const EXAMPLES: [(i64, i64); 3] = [(-7, 7), (-4921, 132_867), (-3_587_227, 2_615_088_483)];

struct Verdict {
    pass: bool,
    detail: String,
}

fn examples() -> Vec<MonicCubic> {
    EXAMPLES
        .iter()
        .flat_map(|&(b, c)| [MonicCubic::depressed(b, c), MonicCubic::depressed(b, -c)])
        .collect()
}

fn within(limit: Duration, elapsed: Duration, what: &str, failures: &mut Vec<String>) {
    if elapsed > limit {
        failures.push(format!("{what} took {elapsed:.1?} (limit {limit:?})"));
    }
}

fn verdict(failures: Vec<String>, ok: impl Into<String>) -> Verdict {
    if failures.is_empty() {
        Verdict {
            pass: true,
            detail: ok.into(),
        }
    } else {
        Verdict {
            pass: false,
            detail: failures.join("; "),
        }
    }
}

fn criterion_1() -> Verdict {
    let mut failures = Vec::new();
    let mut certified = 0;
    for f in examples() {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_klein-hasse"))
            .args([
                "certify",
                "-B",
                &f.b.to_string(),
                "-C",
                &f.c.to_string(),
                "--json",
            ])
            .output()
            .expect("binary runs");
        within(
            Duration::from_secs(120),
            start.elapsed(),
            &format!("certify {f}"),
            &mut failures,
        );
        let doc = String::from_utf8_lossy(&out.stdout);
        let Ok(v) = serde_json::from_str::<Value>(&doc) else {
            failures.push(format!(
                "{f}: no certificate (exit {:?})",
                out.status.code()
            ));
            continue;
        };
        if let Err(e) = validate_json(&doc) {
            failures.push(format!("{f}: {e}"));
        }
        let expected_code = match v["status"].as_str() {
            Some("counterexample_certified") => 0,
            Some("failed") => 1,
            _ => 3,
        };
        if out.status.code() != Some(expected_code) {
            failures.push(format!(
                "{f}: exit code {:?} does not match status",
                out.status.code()
            ));
        }
        let accepted = v["status"] == "counterexample_certified"
            || (v["status"] == "unknown" && v["reason"] == "condition (v) undecided");
        if accepted {
            certified += 1;
        } else {
            failures.push(format!(
                "{f}: {} ({})",
                v["status"].as_str().unwrap_or("?"),
                v["reason"].as_str().unwrap_or("")
            ));
        }
    }
    verdict(failures, format!("{certified}/6 certified"))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let c0 = QuarticForm::c_zero();
    let mut failures = Vec::new();
    let count = count_points_fp(&c0, 2);
    if count != 0 {
        failures.push(format!("#C0(F_2) = {count}"));
    }
    match qp_solvable(&c0, 2, 10) {
        Ok(v) if v.status.is_empty() => {}
        Ok(v) => failures.push(format!("qp_solvable: {v}")),
        Err(e) => failures.push(format!("qp_solvable: {e}")),
    }
    within(
        Duration::from_secs(1),
        start.elapsed(),
        "criterion 2",
        &mut failures,
    );
    verdict(failures, "C0(F_2) = 0, C0(Q_2) empty")
}

/// Monomials of the reduction mod 2 for odd `C`, as displayed for odd and even `B`.
fn displayed_mod_two(b_odd: bool) -> BTreeSet<[u32; 3]> {
    let odd: &[[u32; 3]] = &[
        [4, 0, 0],
        [2, 2, 0],
        [2, 1, 1],
        [2, 0, 2],
        [1, 3, 0],
        [1, 1, 2],
        [1, 0, 3],
        [0, 4, 0],
        [0, 2, 2],
        [0, 0, 4],
    ];
    let even: &[[u32; 3]] = &[[4, 0, 0], [2, 1, 1], [1, 3, 0], [1, 0, 3], [0, 2, 2]];
    (if b_odd { odd } else { even }).iter().copied().collect()
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a11);
    let mut failures = Vec::new();
    let (mut odd_b, mut even_b) = (0, 0);
    while odd_b + even_b < 200 {
        let b: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let c: i64 = 2 * rng.gen_range(-500_000..500_000) + 1;
        let b_odd = b % 2 != 0;
        if (b_odd && odd_b == 100) || (!b_odd && even_b == 100) {
            continue;
        }
        let Ok(form) = twist_from_cubic(&MonicCubic::depressed(b, c)) else {
            continue;
        };
        let reduced = form.reduce_mod(2);
        let support: BTreeSet<[u32; 3]> = MONOMIALS
            .iter()
            .copied()
            .filter(|&[i, j, k]| reduced.coefficient(i, j, k) != 0)
            .collect();
        if support != displayed_mod_two(b_odd) {
            failures.push(format!("B={b} C={c}: support {support:?}"));
        }
        if b_odd {
            odd_b += 1;
        } else {
            even_b += 1;
        }
    }
    within(
        Duration::from_secs(5),
        start.elapsed(),
        "criterion 3",
        &mut failures,
    );
    verdict(failures, "200 random cubics (100 odd B, 100 even B) match")
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    for p in [11u64, 13, 7] {
        match verify_prime_sweep(p, DEFAULT_DEPTH_CAP) {
            Ok(report) => {
                let identity = report.identity_failures();
                if p != 7 && !identity.is_empty() {
                    failures.push(format!(
                        "p={p}: identity fails for {} pairs",
                        identity.len()
                    ));
                }
                let lift = report.lift_failures();
                if !lift.is_empty() {
                    let first = lift[0];
                    failures.push(format!(
                        "p={p}: no lift for {} pairs, e.g. b={} c={}",
                        lift.len(),
                        first.b,
                        first.c
                    ));
                }
                let unchecked = report
                    .entries
                    .iter()
                    .filter(|e| e.c != 0 && e.liftable.is_none())
                    .count();
                if unchecked > 0 {
                    failures.push(format!("p={p}: {unchecked} pairs with c != 0 not checked"));
                }
            }
            Err(e) => failures.push(format!("p={p}: {e}")),
        }
    }
    within(
        Duration::from_secs(30),
        start.elapsed(),
        "criterion 4",
        &mut failures,
    );
    verdict(
        failures,
        "identity at 11, 13; lifts for c != 0 at 7, 11, 13",
    )
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    let forms: Vec<QuarticForm> = std::iter::once(QuarticForm::klein())
        .chain(
            examples()
                .iter()
                .map(|f| twist_from_cubic(f).expect("example twist")),
        )
        .collect();
    for form in &forms {
        match trace_sweep(form, 50) {
            Ok(rows) => {
                for r in rows {
                    checked += 1;
                    if !r.member {
                        failures.push(format!(
                            "{}: trace {} at p={} not allowed",
                            form.label(),
                            r.trace,
                            r.p
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("{}: {e}", form.label())),
        }
    }
    for p in [11u64, 23, 29] {
        let set = allowed_traces(p).expect("trace set");
        if set.contains(p as i64 + 1) {
            failures.push(format!(
                "p+1 = {} is allowed at p={p} via {}",
                p + 1,
                set.matches(p as i64 + 1).join(",")
            ));
        }
    }
    within(
        Duration::from_secs(10),
        start.elapsed(),
        "criterion 5",
        &mut failures,
    );
    verdict(
        failures,
        format!("{checked} (curve, prime) pairs in the trace sets; p+1 excluded at 11, 23, 29"),
    )
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let outcome = search(0..13, DEFAULT_FACTOR_BUDGET, None);
    let hits: Vec<u64> = outcome.hits.iter().map(|h| h.c_prime).collect();
    for c in [0, 1, 2] {
        if !hits.contains(&c) {
            failures.push(format!("no hit at c'={c}"));
        }
    }
    for h in &outcome.hits {
        if !h.factorization.is_complete() {
            failures.push(format!(
                "hit at c'={} with incomplete factorization",
                h.c_prime
            ));
        }
    }
    let (two, seven) = (BigInt::from(2), BigInt::from(7));
    for c in 0..=50u64 {
        let n = BigInt::from(family_n(c));
        let v2 = valuation(&n, &two).expect("valuation");
        let v7 = valuation(&n, &seven).expect("valuation");
        if v2 != 2 {
            failures.push(format!("v2(N) = {v2} at c'={c}"));
        }
        if (v7 == 1) == is_excluded(c) {
            failures.push(format!("v7(N) = {v7} at c'={c}"));
        }
    }
    within(
        Duration::from_secs(300),
        start.elapsed(),
        "criterion 6",
        &mut failures,
    );
    verdict(
        failures,
        format!("hits at c' = {hits:?}; valuations hold for c' <= 50"),
    )
}

fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i128;
    (r - 1..=r + 1).find(|s| *s >= 0 && s * s == n)
}

fn criterion_7() -> Verdict {
    let mut failures = Vec::new();
    let (mut case3, mut case4, mut case8) = (Vec::new(), Vec::new(), Vec::new());
    for b in -300i128..=300 {
        for c in -300i128..=300 {
            let delta = -4 * b * b * b - 27 * c * c;
            let bucket = if exact_sqrt(delta).is_some() {
                &mut case4
            } else if delta % 7 == 0 && exact_sqrt(-delta / 7).is_some() {
                &mut case3
            } else {
                &mut case8
            };
            bucket.push(MonicCubic::depressed(b as i64, c as i64));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7d37);
    let irreducible = |v: &Vec<MonicCubic>, tag| -> Vec<MonicCubic> {
        v.iter()
            .filter(|f| classify_case(f).is_ok_and(|c| c.tag == tag))
            .cloned()
            .collect()
    };
    let mut sample = Vec::new();
    for (pool, tag, take) in [
        (&case3, CaseTag::Case3, 17),
        (&case4, CaseTag::Case4, 17),
        (&case8, CaseTag::Case8, 16),
    ] {
        let pool = if tag == CaseTag::Case8 {
            let picks: Vec<MonicCubic> = pool.choose_multiple(&mut rng, 400).cloned().collect();
            irreducible(&picks, tag)
        } else {
            irreducible(pool, tag)
        };
        if pool.len() < take {
            failures.push(format!(
                "only {} irreducible cubics of {}",
                pool.len(),
                tag.as_str()
            ));
        }
        sample.extend(pool.choose_multiple(&mut rng, take).cloned());
    }
    for f in &sample {
        match twist_matrix_check(f, 1e-6) {
            Ok(m) if m.pass => {}
            Ok(m) => failures.push(format!("{f}: det {} vs {}", m.determinant, m.expected)),
            Err(e) => failures.push(format!("{f}: {e}")),
        }
    }
    verdict(
        failures,
        format!(
            "{} cubics (17 case3, 17 case4, 16 case8) within 1e-6",
            sample.len()
        ),
    )
}

fn criterion_8() -> Verdict {
    let mut failures = Vec::new();
    for p in klein_hasse::arith::primes_below(10_000) {
        if hasse_weil_nonempty(p) != (p >= 37) {
            failures.push(format!(
                "hasse_weil_nonempty({p}) = {}",
                hasse_weil_nonempty(p)
            ));
        }
    }
    let mut fixtures = vec![QuarticForm::klein(), QuarticForm::c_zero()];
    fixtures.extend(
        examples()
            .iter()
            .map(|f| twist_from_cubic(f).expect("example twist")),
    );
    let mut checked = 0;
    for form in &fixtures {
        for p in klein_hasse::arith::primes_below(100)
            .into_iter()
            .filter(|p| *p >= 37)
        {
            if form.is_smooth_mod_p(p) {
                checked += 1;
                if count_points_fp(form, p) == 0 {
                    failures.push(format!("{} has no points mod {p}", form.label()));
                }
            }
        }
    }
    verdict(
        failures,
        format!("cutoff at 37; {checked} smooth reductions with 37 <= p < 100 have points"),
    )
}

fn criterion_9() -> Verdict {
    let mut failures = Vec::new();
    let klein = rational_point_search(&QuarticForm::klein(), 1);
    if klein != Some([1, 0, 0].map(BigInt::from)) {
        failures.push(format!("Klein at H=1: {klein:?}"));
    }
    for f in examples() {
        let form = twist_from_cubic(&f).expect("example twist");
        if let Some([x, y, z]) = rational_point_search(&form, 10_000) {
            failures.push(format!("{f}: rational point ({x}:{y}:{z})"));
        }
    }
    verdict(
        failures,
        "(1:0:0) on Klein; no point of height <= 10^4 on the six twists",
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("example reproduction", criterion_1),
        ("C0 emptiness", criterion_2),
        ("mod-2 identities", criterion_3),
        ("bad-prime identity sweep", criterion_4),
        ("trace consistency", criterion_5),
        ("conjecture sweep", criterion_6),
        ("determinant identity", criterion_7),
        ("Hasse-Weil cutoff", criterion_8),
        ("rational sanity", criterion_9),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let mark = if v.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {} {:<26} {mark}  [{:.1?}] {}",
            n + 1,
            name,
            start.elapsed(),
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
