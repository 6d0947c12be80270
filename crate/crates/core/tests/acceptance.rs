//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines always appear in `cargo test` output.
//!
//! Criterion 4 cannot pass as stated: the cleared type iii decomposition is
//! not an identity in the free algebra. It is printed as FAIL, and the run
//! only succeeds when that is the sole failing case anywhere.

use onsager_core::central::{self, Route};
use onsager_core::qfield::q_int;
use onsager_core::{dims, relations, rewrite, series, CheckReport, NCPoly};
use std::process::ExitCode;
use std::time::{Duration, Instant};

/// Row displayed for the graded dimensions, degrees 0 through 8.
const DIM_ROW: [i64; 9] = [1, 2, 5, 10, 20, 36, 65, 110, 185];

/// Cases that fail for a documented reason, keyed by criterion.
const KNOWN_FAILURES: &[(u32, &str)] = &[(4, "iii:cleared")];

struct Criterion {
    id: u32,
    title: &'static str,
    target: Option<Duration>,
    run: fn() -> CheckReport,
}

fn merge(suite: &str, parts: impl IntoIterator<Item = CheckReport>) -> CheckReport {
    let mut rep = CheckReport::new(suite);
    for p in parts {
        rep.extend(p);
    }
    rep
}

fn dimension_table() -> CheckReport {
    let mut rep = dims::check_word_counts(8);
    for (d, want) in DIM_ROW.iter().enumerate() {
        let n = dims::enumerate_irreducible(d as u64).len();
        rep.push(onsager_core::CaseResult::new(format!("row[{d}]"), n as i64 == *want, format!("{n} vs {want}")));
    }
    rep
}

fn gf_layer() -> CheckReport {
    merge(
        "gf-layer",
        [
            series::check_gf_relations(5),
            series::check_named_series_identities(5),
            series::check_decompositions(4),
            series::check_gf_vs_index(3),
        ],
    )
}

fn central_elements() -> CheckReport {
    let mut rep = central::check_central_elements(4, 6);
    let two = q_int(2);
    let z0 = central::z_n(0, Route::Extraction).as_poly;
    rep.push(onsager_core::CaseResult::new("Z_0 extracted=[2]^2", z0 == NCPoly::scalar(&two * &two), z0.to_string()));
    rep
}

fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Criterion { id: 1, title: "dimension table d<=8", target: secs(60), run: dimension_table },
        Criterion {
            id: 2,
            title: "defining relations, indices <=4",
            target: secs(60),
            run: || relations::check_relations(4),
        },
        Criterion {
            id: 3,
            title: "confluence of all overlaps, bound 3",
            target: secs(300),
            run: || rewrite::check_ambiguities(3),
        },
        Criterion { id: 4, title: "generating-function layer", target: None, run: gf_layer },
        Criterion { id: 5, title: "central elements n<=4, index bound 6", target: secs(300), run: central_elements },
        Criterion { id: 6, title: "transformed-generator tables", target: None, run: central::check_transform_tables },
        Criterion { id: 7, title: "generator recovery n<=3", target: None, run: || central::check_recovery(3) },
        Criterion { id: 8, title: "Dolan/Grady relations", target: None, run: central::check_dolan_grady },
        Criterion {
            id: 9,
            title: "matrix factorization, order 3",
            target: None,
            run: || central::check_matrix_factorization(3),
        },
        Criterion { id: 10, title: "dimension identity, order 12", target: None, run: || dims::check_dim_identity(12) },
    ]
}

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let rep = (c.run)();
        let took = start.elapsed();
        let total = rep.len();
        let failed: Vec<_> = rep.failures().collect();
        let verdict = if failed.is_empty() && total > 0 { "PASS" } else { "FAIL" };
        let slow = match c.target {
            Some(t) if took > t => format!(" (over {}s target)", t.as_secs()),
            _ => String::new(),
        };
        println!(
            "criterion {:>2}: {verdict}  {}  [{}/{total} cases, {:.2}s{slow}]",
            c.id,
            c.title,
            total - failed.len(),
            took.as_secs_f64()
        );
        for f in &failed {
            let known = KNOWN_FAILURES.contains(&(c.id, f.name.as_str()));
            let tag = if known { "known" } else { "unexpected" };
            let detail: String = f.detail.chars().take(160).collect();
            println!("    {tag} failure {}: {detail}", f.name);
            if !known {
                unexpected.push(format!("{}:{}", c.id, f.name));
            }
        }
        if total == 0 {
            unexpected.push(format!("{}:no cases", c.id));
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: every failure is documented ({})", KNOWN_FAILURES.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
