//! Subcommands, option handling and report rendering.

use crate::parse::{parse_poly, ParseError};
use clap::{Parser, Subcommand, ValueEnum};
use onsager_core::central::{self, Route, Weighting, Which};
use onsager_core::series::{self, Var};
use onsager_core::{dims, relations, rewrite, CaseResult, CheckReport, Family, NCPoly};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "onsager",
    version,
    about = "Exact PBW normal forms and identity checks for the alternating central extension of the q-Onsager algebra"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the PBW normal form of an expression.
    Normalize {
        /// Expression text; read from stdin when omitted or `-`.
        expr: Option<String>,
        /// Read the expression from a file.
        #[arg(long, conflicts_with = "expr")]
        file: Option<PathBuf>,
    },
    /// Run a verification suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Generator index bound (relations, ambiguities: 3; central: 6).
        #[arg(long)]
        bound: Option<u32>,
        /// Series truncation order (default 4).
        #[arg(long)]
        order: Option<i32>,
        /// Largest n for Z_n (default 4).
        #[arg(long)]
        n: Option<u32>,
    },
    /// Compute Z_n by both routes.
    Zn {
        #[arg(long)]
        n: u32,
    },
    /// Irreducible word counts by degree.
    Dims {
        #[arg(long, default_value_t = 8)]
        max_degree: u64,
    },
    /// Rebuild the generators from W_0, W_1 and Z_1..Z_n.
    Recover {
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Print a series in t.
    Series {
        #[arg(value_enum, default_value_t = SeriesKind::Z)]
        kind: SeriesKind,
        #[arg(long, default_value_t = 4)]
        order: i32,
        /// Generating function to substitute into (for `subst`).
        #[arg(long, value_enum, default_value_t = FamilyArg::Wminus)]
        family: FamilyArg,
        /// Series substituted for the variable (for `subst`).
        #[arg(long, value_enum, default_value_t = AtArg::S)]
        at: AtArg,
        /// Multiply by the substituted series as well (for `subst`).
        #[arg(long)]
        weighted: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Relations,
    Ambiguities,
    Gf,
    Central,
    DolanGrady,
    Matrix,
    Tables,
    Decompositions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// Z(t), coefficients in normal form.
    Z,
    /// A generating function evaluated at S or T.
    Subst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Wminus,
    Wplus,
    G,
    Gt,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Wminus => Family::Wminus,
            FamilyArg::Wplus => Family::Wplus,
            FamilyArg::G => Family::G,
            FamilyArg::Gt => Family::Gtilde,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AtArg {
    S,
    T,
}

/// Problems with the invocation itself, reported with exit code 2.
#[derive(Debug, Error)]
pub enum UsageError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

/// The machine-readable result of one command.
#[derive(Serialize, Debug)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Vec<CaseResult>,
    pub version: &'static str,
}

impl Report {
    fn new(command: &str) -> Self {
        Report { command: command.to_string(), parameters: BTreeMap::new(), results: Vec::new(), version: VERSION }
    }

    fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), v.into());
        self
    }

    fn with(mut self, rep: CheckReport) -> Self {
        self.results.extend(rep.results);
        self
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|c| c.pass)
    }
}

/// A finished command: the report plus lines shown before it in text mode.
pub struct Outcome {
    pub report: Report,
    pub body: Vec<String>,
    /// Print only the body in text mode.
    pub quiet: bool,
}

impl Outcome {
    fn checks(report: Report) -> Self {
        Outcome { report, body: Vec::new(), quiet: false }
    }

    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.report).expect("serializable report"),
            Format::Text => {
                let mut lines = self.body.clone();
                if !self.quiet {
                    for c in &self.report.results {
                        let tag = if c.pass { "ok  " } else { "FAIL" };
                        if c.detail.is_empty() {
                            lines.push(format!("{tag} {}", c.name));
                        } else {
                            lines.push(format!("{tag} {}  {}", c.name, c.detail));
                        }
                    }
                    let n = self.report.results.len();
                    let ok = self.report.results.iter().filter(|c| c.pass).count();
                    lines.push(format!("{}: {ok}/{n} passed", self.report.command));
                }
                lines.join("\n")
            }
        }
    }
}

/// Sizes the worker pool from `ONSAGER_WORKERS`, if set.
pub fn configure_workers() -> Result<(), UsageError> {
    let Ok(v) = std::env::var("ONSAGER_WORKERS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError::Invalid(format!("ONSAGER_WORKERS must be a positive integer, got '{v}'")))?;
    // A pool may already exist when running inside tests; that is fine.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn read_input(expr: Option<String>, file: Option<PathBuf>) -> Result<String, UsageError> {
    match (expr, file) {
        (_, Some(path)) => Ok(std::fs::read_to_string(path)?),
        (Some(e), None) if e != "-" => Ok(e),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn positive(name: &str, v: i32) -> Result<i32, UsageError> {
    if v < 0 {
        return Err(UsageError::Invalid(format!("--{name} must be nonnegative")));
    }
    Ok(v)
}

pub fn run(command: Command) -> Result<Outcome, UsageError> {
    match command {
        Command::Normalize { expr, file } => {
            let text = read_input(expr, file)?;
            let p = parse_poly(&text)?;
            let nf = onsager_core::normal_form(&p);
            let mut report = Report::new("normalize").param("input", text.trim());
            report.results.push(CaseResult::new("normal_form", true, nf.to_string()));
            Ok(Outcome { report, body: vec![nf.to_string()], quiet: true })
        }
        Command::Check { suite, bound, order, n } => check(suite, bound, order, n),
        Command::Zn { n } => Ok(zn(n)),
        Command::Dims { max_degree } => Ok(dims_table(max_degree)),
        Command::Recover { n } => {
            if n == 0 {
                return Err(UsageError::Invalid("--n must be at least 1".into()));
            }
            Ok(Outcome::checks(Report::new("recover").param("n", n).with(central::check_recovery(n))))
        }
        Command::Series { kind, order, family, at, weighted } => {
            series_cmd(kind, positive("order", order)?, family, at, weighted)
        }
    }
}

fn check(suite: Suite, bound: Option<u32>, order: Option<i32>, n: Option<u32>) -> Result<Outcome, UsageError> {
    let order = positive("order", order.unwrap_or(4))?;
    let n = n.unwrap_or(4);
    let report = match suite {
        Suite::Relations => {
            let b = bound.unwrap_or(3);
            Report::new("check relations").param("bound", b).with(relations::check_relations(b))
        }
        Suite::Ambiguities => {
            let b = bound.unwrap_or(3);
            Report::new("check ambiguities").param("bound", b).with(rewrite::check_ambiguities(b))
        }
        Suite::Gf => {
            let b = bound.unwrap_or(3);
            Report::new("check gf")
                .param("order", order)
                .param("bound", b)
                .with(series::check_gf_relations(order))
                .with(series::check_named_series_identities(order))
                .with(series::check_gf_vs_index(b as i32))
        }
        Suite::Decompositions => {
            Report::new("check decompositions").param("order", order).with(series::check_decompositions(order))
        }
        Suite::Central => {
            let b = bound.unwrap_or(6);
            let mut r = Report::new("check central")
                .param("n", n)
                .param("bound", b)
                .param("order", order)
                .with(central::check_central_elements(n, b))
                .with(central::check_z_series(order));
            if n >= 1 {
                r = r.with(central::check_z_bar(n));
            }
            r
        }
        Suite::DolanGrady => Report::new("check dolan-grady").with(central::check_dolan_grady()),
        Suite::Matrix => {
            Report::new("check matrix").param("order", order).with(central::check_matrix_factorization(order))
        }
        Suite::Tables => Report::new("check tables").with(central::check_transform_tables()),
    };
    Ok(Outcome::checks(report))
}

fn zn(n: u32) -> Outcome {
    let direct = central::z_n(n, Route::Direct).as_poly;
    let extracted = central::z_n(n, Route::Extraction).as_poly;
    let shape = |p: &NCPoly| format!("terms={} max_degree={}", p.len(), p.max_degree());
    let mut report = Report::new("zn").param("n", n);
    let fixed = |img: NCPoly| onsager_core::normal_form(&img) == direct;
    report.results.extend([
        CaseResult::new("direct", true, format!("{} {direct}", shape(&direct))),
        CaseResult::new("extraction", true, format!("{} {extracted}", shape(&extracted))),
        CaseResult::new("routes-agree", direct == extracted, ""),
        CaseResult::new("sigma-fixed", fixed(direct.sigma()), ""),
        CaseResult::new("dagger-fixed", fixed(direct.dagger()), ""),
        CaseResult::new("degree<=2n", direct.max_degree() <= 2 * n as u64, format!("{}", direct.max_degree())),
    ]);
    let body = vec![format!("Z_{n} (direct)     = {direct}"), format!("Z_{n} (extraction) = {extracted}")];
    Outcome { report, body, quiet: false }
}

fn dims_table(max_degree: u64) -> Outcome {
    let h = dims::hilbert_aq(max_degree as usize);
    let counts = dims::check_word_counts(max_degree);
    let row: Vec<String> = h.coeffs().iter().map(ToString::to_string).collect();
    let body =
        vec!["d: ".to_string() + &(0..=max_degree).map(|d| d.to_string()).collect::<Vec<_>>().join(" "), row.join(" ")];
    let report = Report::new("dims")
        .param("max_degree", max_degree)
        .param("dims", json!(h.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>()))
        .with(counts)
        .with(dims::check_dim_identity(max_degree as usize));
    Outcome { report, body, quiet: false }
}

fn series_cmd(
    kind: SeriesKind,
    order: i32,
    family: FamilyArg,
    at: AtArg,
    weighted: bool,
) -> Result<Outcome, UsageError> {
    let (s, mut report) = match kind {
        SeriesKind::Z => (central::z_series(order), Report::new("series z")),
        SeriesKind::Subst => {
            let which = match at {
                AtArg::S => Which::S,
                AtArg::T => Which::T,
            };
            let w = if weighted { Weighting::TimesArg } else { Weighting::Plain };
            let fam_name = format!("{family:?}").to_lowercase();
            let r = Report::new("series subst")
                .param("family", fam_name)
                .param("at", format!("{at:?}"))
                .param("weighted", weighted);
            (central::subst_st(family.into(), which, w, order), r)
        }
    };
    report = report.param("order", order);
    let mut body = Vec::new();
    for k in 0..=order {
        let c = s.coeff(&[(Var::T, k)]);
        body.push(format!("t^{k}: {c}"));
        report.results.push(CaseResult::new(format!("t^{k}"), true, c.to_string()));
    }
    Ok(Outcome { report, body, quiet: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(std::iter::once("onsager").chain(args.iter().copied())).unwrap();
        run(cli.command).unwrap()
    }

    #[test]
    fn normalize_prints_normal_form() {
        let out = run_args(&["normalize", "W[0]*W[1]"]);
        assert_eq!(out.render(Format::Text), "W[0]*W[1]");
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn dims_row() {
        let out = run_args(&["dims", "--max-degree", "8"]);
        assert!(out.render(Format::Text).lines().any(|l| l == "1 2 5 10 20 36 65 110 185"));
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn json_shape() {
        let out = run_args(&["check", "dolan-grady"]);
        let v: Value = serde_json::from_str(&out.render(Format::Json)).unwrap();
        for key in ["command", "parameters", "results", "version"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["results"][0]["pass"], Value::Bool(true));
    }

    #[test]
    fn defaults_recorded() {
        let out = run_args(&["check", "relations"]);
        assert_eq!(out.report.parameters["bound"], json!(3));
    }

    #[test]
    fn bad_order_is_usage_error() {
        let cli = Cli::try_parse_from(["onsager", "check", "gf", "--order=-1"]).unwrap();
        assert!(matches!(run(cli.command), Err(UsageError::Invalid(_))));
    }
}
