use onsager_cli::parse::parse_poly;
use onsager_core::qfield::q_int;
use onsager_core::{normal_form, Generator, NCPoly, QRat, Word};
use proptest::prelude::*;
use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn onsager(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onsager")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn normalize_arg_and_stdin_agree() {
    let a = onsager(&["normalize", "W[1]*W[0]"]);
    assert_eq!(a.status.code(), Some(0));
    let mut child = Command::new(env!("CARGO_BIN_EXE_onsager"))
        .arg("normalize")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"W[1]\n  * W[0]").unwrap();
    let b = child.wait_with_output().unwrap();
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("W[0]*W[1]"));
}

#[test]
fn normalize_from_file() {
    let path = std::env::temp_dir().join(format!("onsager-cli-{}.txt", std::process::id()));
    std::fs::write(&path, "G[1]*W[0] - W[0]*G[1]").unwrap();
    let o = onsager(&["normalize", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).trim().is_empty());
}

#[test]
fn parse_error_reports_position_and_exits_2() {
    let o = onsager(&["normalize", "W[0] *\n  W[1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("2:"), "{err}");
}

#[test]
fn bad_index_is_usage_error() {
    assert_eq!(onsager(&["normalize", "G[-1]"]).status.code(), Some(2));
}

#[test]
fn unknown_suite_is_usage_error() {
    assert_eq!(onsager(&["check", "nonsense"]).status.code(), Some(2));
}

#[test]
fn json_report_shape() {
    let o = onsager(&["--format", "json", "check", "relations", "--bound", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["command", "parameters", "results", "version"]);
    assert_eq!(v["parameters"]["bound"], 1);
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r.as_object().unwrap().len(), 3);
        assert_eq!(r["pass"], true);
    }
}

#[test]
fn failing_suite_exits_1() {
    // The cleared form of the type iii decomposition does not hold in the free algebra.
    let o = onsager(&["check", "decompositions", "--order", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let fails: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with("FAIL")).map(String::from).collect();
    assert_eq!(fails.len(), 1);
    assert!(fails[0].starts_with("FAIL iii:cleared"));
}

#[test]
fn dims_prints_row() {
    let o = onsager(&["dims"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "1 2 5 10 20 36 65 110 185"));
}

#[test]
fn worker_count_does_not_change_results() {
    let run = |w: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_onsager"))
            .args(["--format", "json", "check", "ambiguities", "--bound", "2"])
            .env("ONSAGER_WORKERS", w)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn bad_worker_count_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_onsager")).arg("dims").env("ONSAGER_WORKERS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zn_and_recover() {
    let o = onsager(&["zn", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ok   routes-agree"));
    assert_eq!(onsager(&["recover", "--n", "1"]).status.code(), Some(0));
}

#[test]
fn series_lists_each_power() {
    let o = onsager(&["series", "subst", "--order", "2", "--family", "g", "--at", "t"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for k in 0..=2 {
        assert!(s.contains(&format!("t^{k}: ")), "{s}");
    }
}

fn coeff() -> impl Strategy<Value = QRat> {
    prop_oneof![
        (-5i64..=5).prop_map(QRat::from_int),
        (-3i64..=3).prop_map(QRat::q_pow),
        (1i64..=3, -2i64..=2).prop_map(|(n, d)| &q_int(n) / &QRat::from_int(if d == 0 { 7 } else { d })),
        (0i64..=2, 1i64..=3).prop_map(|(a, b)| &QRat::q_pow(a) / &(&q_int(b) + &QRat::one())),
    ]
}

fn poly() -> impl Strategy<Value = NCPoly> {
    let gens = Generator::all_up_to(2);
    let word = prop::collection::vec(prop::sample::select(gens), 0..4).prop_map(Word);
    prop::collection::vec((word, coeff()), 0..5).prop_map(|ts| {
        let mut p = NCPoly::zero();
        for (w, c) in ts {
            p.add_term(w, c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rendered_polynomials_parse_back(p in poly()) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn normal_forms_parse_back(p in poly()) {
        let nf = normal_form(&p);
        prop_assert_eq!(parse_poly(&nf.to_string()).unwrap(), nf);
    }
}
