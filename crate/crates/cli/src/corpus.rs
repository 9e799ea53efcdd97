//! Embedded reference corpus and the checker behind `verify-paper`.
//!
//! Each case is a command line plus assertions on JSON pointers into the
//! resulting report. Expected values were computed independently and frozen.

use std::time::Instant;

use clap::Parser;
use expset_core::classify::{irreducibility_oracle, ClassifyOptions};
use expset_core::epoly::expand_e;
use expset_core::numeric::Mode;
use expset_core::parser::parse_lifted;
use expset_core::{Hyperplane, Poly, Rat, Var};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::commands::{execute, Cli};
use crate::report::{CliError, ErrorKind, SCHEMA_VERSION};

pub const CORPUS: &str = include_str!("../golden/corpus.json");

#[derive(Debug, Clone, Deserialize)]
pub struct Corpus {
    pub version: u32,
    pub cases: Vec<Case>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Case {
    pub id: String,
    pub claim: String,
    /// Command line without the program name.
    #[serde(default)]
    pub args: Vec<String>,
    /// Library call for results that no subcommand prints.
    #[serde(default)]
    pub call: Option<Call>,
    #[serde(default)]
    pub expect_error: Option<ErrorKind>,
    #[serde(default)]
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "fn", rename_all = "camelCase")]
pub enum Call {
    Substitute { expr: String, var: String, with: String },
    Eval { expr: String, point: Vec<String> },
    Restrict { expr: String, normal: Vec<i64> },
    Oracle { expr: String },
}

#[derive(Debug, Clone, Deserialize)]
pub struct Check {
    pub pointer: String,
    pub op: Op,
    #[serde(default)]
    pub value: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Op {
    Eq,
    SetEq,
    Len,
    Approx,
    Within,
    Contains,
    WidthAtMost,
    Gt,
    Lt,
    PolyEq,
    CellsNear,
    SomeCellNear,
    SignScan,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub pointer: String,
    pub op: Op,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseResult {
    pub id: String,
    pub claim: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub error: Option<String>,
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verification {
    pub cases: Vec<CaseResult>,
    pub passed: usize,
    pub failed: usize,
}

pub fn load() -> Result<Corpus, CliError> {
    serde_json::from_str(CORPUS).map_err(|e| CliError::internal(format!("corpus: {e}")))
}

pub fn verify(seed: u64, mode: Mode, timings: bool) -> Result<Verification, CliError> {
    let corpus = load()?;
    let mut cases = Vec::new();
    for case in &corpus.cases {
        let start = Instant::now();
        let mut r = run_case(case, seed, mode);
        if timings {
            r.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        cases.push(r);
    }
    let passed = cases.iter().filter(|c| c.passed).count();
    let failed = cases.len() - passed;
    Ok(Verification { cases, passed, failed })
}

pub fn run_case(case: &Case, seed: u64, mode: Mode) -> CaseResult {
    if let Some(call) = &case.call {
        let mut out = CaseResult {
            id: case.id.clone(),
            claim: case.claim.clone(),
            passed: false,
            checks: Vec::new(),
            error: None,
            elapsed_ms: None,
        };
        match library_call(call, seed) {
            Ok(v) => {
                out.checks = case.checks.iter().map(|c| run_check(&v, c)).collect();
                out.passed = case.expect_error.is_none() && out.checks.iter().all(|c| c.passed);
            }
            Err(e) => {
                out.passed = case.expect_error == Some(e.kind);
                out.error = Some(e.message);
            }
        }
        return out;
    }
    let mut argv = vec!["expset".to_string()];
    argv.extend(case.args.iter().cloned());
    argv.extend(["--seed".to_string(), seed.to_string()]);
    if mode == Mode::Rigorous {
        argv.push("--rigorous".into());
    }
    let mut out = CaseResult {
        id: case.id.clone(),
        claim: case.claim.clone(),
        passed: false,
        checks: Vec::new(),
        error: None,
        elapsed_ms: None,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            out.error = Some(format!("bad corpus arguments: {e}"));
            return out;
        }
    };
    match (execute(&cli), case.expect_error) {
        (Ok((report, _)), None) => {
            let v = match serde_json::to_value(&report) {
                Ok(v) => v,
                Err(e) => {
                    out.error = Some(e.to_string());
                    return out;
                }
            };
            out.checks = case.checks.iter().map(|c| run_check(&v, c)).collect();
            out.passed = out.checks.iter().all(|c| c.passed);
        }
        (Ok(_), Some(k)) => out.error = Some(format!("expected a {k:?} error, command succeeded")),
        (Err(e), Some(k)) => {
            out.passed = e.kind == k;
            out.error = Some(e.message);
        }
        (Err(e), None) => out.error = Some(e.message),
    }
    out
}

fn rational(text: &str) -> Result<Rat, CliError> {
    let p = parse_lifted(text, None)?;
    if !p.is_constant() {
        return Err(CliError::input(format!("not a rational constant: {text}")));
    }
    Ok(p.constant_term())
}

fn variable(name: &str, ambient: usize) -> Result<Var, CliError> {
    let bad = || CliError::input(format!("bad variable {name}"));
    let (kind, idx) = name.split_at(1);
    let i: usize = idx.parse().map_err(|_| bad())?;
    if i == 0 || i > ambient {
        return Err(bad());
    }
    match kind {
        "x" => Ok(Var::X(i - 1)),
        "u" => Ok(Var::U(i - 1)),
        _ => Err(bad()),
    }
}

/// Runs a library call and shapes its output like a report.
fn library_call(call: &Call, seed: u64) -> Result<Value, CliError> {
    let (input, result) = match call {
        Call::Substitute { expr, var, with } => {
            let p = parse_lifted(expr, None)?;
            let v = variable(var, p.ambient())?;
            let s = p.substitute_value(v, &rational(with)?);
            (p.to_string(), json!({ "polynomial": s.to_string() }))
        }
        Call::Eval { expr, point } => {
            let p = parse_lifted(expr, None)?;
            let pt = point.iter().map(|t| rational(t)).collect::<Result<Vec<_>, _>>()?;
            let value = p.eval(&pt)?;
            (p.to_string(), json!({ "value": Poly::constant(0, value).to_string() }))
        }
        Call::Restrict { expr, normal } => {
            let p = parse_lifted(expr, None)?;
            let h = Hyperplane::primitive_normalize(normal)?;
            let r = expand_e(&p).restrict_to_hyperplane(&h)?;
            (
                p.to_string(),
                json!({
                    "hyperplane": h.to_string(),
                    "restriction": r.to_string(),
                    "identicallyZero": r.is_identically_zero(),
                }),
            )
        }
        Call::Oracle { expr } => {
            let p = parse_lifted(expr, None)?;
            let v = irreducibility_oracle(&p, ClassifyOptions::default().attempts, seed)?;
            (p.to_string(), serde_json::to_value(&v)?)
        }
    };
    Ok(json!({ "schemaVersion": SCHEMA_VERSION, "input": input, "result": result }))
}

fn num(v: &Value) -> Option<f64> {
    v.as_f64()
}

fn iv(v: &Value) -> Option<(f64, f64)> {
    Some((v.get("lo")?.as_f64()?, v.get("hi")?.as_f64()?))
}

fn box_sides(cell: &Value) -> Option<[(f64, f64); 2]> {
    let a = cell.as_array()?;
    Some([iv(a.first()?)?, iv(a.get(1)?)?])
}

fn axis_gap(lo: f64, hi: f64, t: f64) -> f64 {
    (lo - t).max(t - hi).max(0.0)
}

/// Distance from a cell to the line `a x + b y = 0`.
fn line_distance(s: [(f64, f64); 2], a: f64, b: f64) -> f64 {
    let corners = [s[0].0, s[0].1]
        .iter()
        .flat_map(|&x| [s[1].0, s[1].1].map(move |y| a * x + b * y))
        .collect::<Vec<_>>();
    let lo = corners.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    axis_gap(lo, hi, 0.0) / a.hypot(b)
}

fn point_distance(s: [(f64, f64); 2], x: f64, y: f64) -> f64 {
    axis_gap(s[0].0, s[0].1, x).hypot(axis_gap(s[1].0, s[1].1, y))
}

fn pairs(v: Option<&Value>) -> Vec<(f64, f64)> {
    v.and_then(Value::as_array)
        .map(|a| {
            a.iter()
                .filter_map(|p| Some((p.get(0)?.as_f64()?, p.get(1)?.as_f64()?)))
                .collect()
        })
        .unwrap_or_default()
}

fn cell_width(report: &Value) -> Option<f64> {
    let w = report.pointer("/result/cellWidth")?.as_array()?;
    w.iter().map(Value::as_f64).try_fold(0.0f64, |m, x| Some(m.max(x?)))
}

fn sorted_strings(v: &Value) -> Option<Vec<String>> {
    let mut s: Vec<String> = v.as_array()?.iter().map(Value::to_string).collect();
    s.sort();
    Some(s)
}

fn run_check(report: &Value, c: &Check) -> CheckResult {
    let (passed, detail) = match report.pointer(&c.pointer) {
        None => (false, "pointer not found".to_string()),
        Some(got) => evaluate(report, got, c),
    };
    CheckResult {
        pointer: c.pointer.clone(),
        op: c.op,
        passed,
        detail,
    }
}

fn evaluate(report: &Value, got: &Value, c: &Check) -> (bool, String) {
    let want = &c.value;
    let shown = || format!("got {got}");
    match c.op {
        Op::Eq => (got == want, shown()),
        Op::SetEq => (
            sorted_strings(got).is_some() && sorted_strings(got) == sorted_strings(want),
            shown(),
        ),
        Op::Len => (
            got.as_array().map(|a| a.len() as u64) == want.as_u64(),
            format!("length {}", got.as_array().map_or(0, Vec::len)),
        ),
        Op::Approx => {
            let ok = match (num(got), want.get(0).and_then(num), want.get(1).and_then(num)) {
                (Some(x), Some(t), Some(tol)) => (x - t).abs() <= tol,
                _ => false,
            };
            (ok, shown())
        }
        Op::Within => {
            let (Some(a), Some(b)) = (want.get(0).and_then(num), want.get(1).and_then(num)) else {
                return (false, "bad range".into());
            };
            let ok = match (num(got), iv(got)) {
                (Some(x), _) => a <= x && x <= b,
                (None, Some((lo, hi))) => a <= lo && hi <= b,
                _ => false,
            };
            (ok, shown())
        }
        Op::Contains => {
            let ok = match (iv(got), num(want)) {
                (Some((lo, hi)), Some(x)) => lo <= x && x <= hi,
                _ => false,
            };
            (ok, shown())
        }
        Op::WidthAtMost => {
            let ok = matches!((iv(got), num(want)), (Some((lo, hi)), Some(w)) if hi - lo <= w);
            (ok, shown())
        }
        Op::Gt => (matches!((num(got), num(want)), (Some(x), Some(y)) if x > y), shown()),
        Op::Lt => (matches!((num(got), num(want)), (Some(x), Some(y)) if x < y), shown()),
        Op::PolyEq => {
            let (Some(a), Some(b)) = (got.as_str(), want.as_str()) else {
                return (false, "expected strings".into());
            };
            match (parse_lifted(a, None), parse_lifted(b, None)) {
                (Ok(p), Ok(q)) => {
                    let n = p.ambient().max(q.ambient());
                    let same = parse_lifted(a, Some(n)).ok() == parse_lifted(b, Some(n)).ok();
                    (same, shown())
                }
                _ => (false, "unparsable polynomial".into()),
            }
        }
        Op::CellsNear | Op::SomeCellNear => {
            let Some(w) = cell_width(report) else {
                return (false, "no cell width".into());
            };
            let tol = want.get("widths").and_then(num).unwrap_or(2.0) * w;
            let lines = pairs(want.get("lines"));
            let points = pairs(want.get("points"));
            let Some(cells) = got.as_array().map(|a| a.iter().map(box_sides).collect::<Option<Vec<_>>>()) else {
                return (false, "not a cell list".into());
            };
            let Some(cells) = cells else {
                return (false, "malformed cell".into());
            };
            if c.op == Op::CellsNear {
                let far = cells
                    .iter()
                    .filter(|&&s| {
                        let dl = lines.iter().map(|&(a, b)| line_distance(s, a, b));
                        let dp = points.iter().map(|&(x, y)| point_distance(s, x, y));
                        dl.chain(dp).fold(f64::INFINITY, f64::min) > tol
                    })
                    .count();
                (far == 0 && !cells.is_empty(), format!("{} cells, {far} far", cells.len()))
            } else {
                let missing = points
                    .iter()
                    .filter(|&&(x, y)| !cells.iter().any(|&s| point_distance(s, x, y) <= tol))
                    .count();
                (missing == 0, format!("{missing} points without a nearby cell"))
            }
        }
        Op::SignScan => sign_scan(report, got, want),
    }
}

/// Brute-force sign scan of the one-variable input over the reported domain;
/// every sign change must fall inside a certified enclosure and the counts must agree.
fn sign_scan(report: &Value, roots: &Value, want: &Value) -> (bool, String) {
    let step = want.get("step").and_then(num).unwrap_or(1e-4);
    let Some(text) = report.pointer("/input").and_then(Value::as_str) else {
        return (false, "no input".into());
    };
    let Some((lo, hi)) = report.pointer("/result/domain").and_then(iv) else {
        return (false, "no domain".into());
    };
    let Ok(p) = parse_lifted(text, None) else {
        return (false, "unparsable input".into());
    };
    let f = expand_e(&p);
    let enclosures: Vec<(f64, f64)> = roots
        .as_array()
        .map(|a| {
            a.iter()
                .filter(|r| r.get("kind").and_then(Value::as_str) != Some("UncertifiedTangential"))
                .filter_map(|r| iv(r.get("enclosure")?))
                .collect()
        })
        .unwrap_or_default();
    let n = ((hi - lo) / step).floor() as u64;
    let mut changes = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=n {
        let x = lo + i as f64 * step;
        let v = f.eval_f64(&[x]);
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if let Some((px, pv)) = prev {
            if pv.signum() != v.signum() {
                changes.push((px, x));
            }
        }
        prev = Some((x, v));
    }
    let unexplained = changes
        .iter()
        .filter(|&&(a, b)| !enclosures.iter().any(|&(l, h)| l <= b && a <= h))
        .count();
    let ok = unexplained == 0 && changes.len() == enclosures.len();
    (
        ok,
        format!(
            "{} sign changes, {} certified roots, {unexplained} unexplained",
            changes.len(),
            enclosures.len()
        ),
    )
}
