//! Subcommand definitions and their execution into reports.

use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand};
use expset_core::classify::{classify_codim1, classify_single_exp, ClassifyOptions, HypothesisEntry, HypothesisStatus};
use expset_core::epoly::expand_e;
use expset_core::hyperplanes::{candidate_hyperplanes, u_exponent_vectors};
use expset_core::numeric::{
    check_transversality, default_domain, isolate_roots_1d, sample_zero_cells_2d, Interval, IntervalBox, Mode,
};
use expset_core::parser::parse_lifted;
use expset_core::Poly;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus;
use crate::report::{CliError, Report, Timings, SCHEMA_VERSION};

#[derive(Debug, Clone, Parser)]
#[command(name = "expset", version, about = "Analyze real zero sets of exponential polynomials P(x, exp(x))")]
pub struct Cli {
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Use exact dyadic interval arithmetic.
    #[arg(long, global = true)]
    pub rigorous: bool,
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Number of variables; defaults to the largest index in the input.
    #[arg(long, global = true)]
    pub ambient: Option<usize>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ExprArg {
    /// Polynomial in x1.., u1.. (exp(xi) is accepted for ui).
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: ExprArg,
    /// Take the real algebraic set Z(P) to be irreducible.
    #[arg(long)]
    pub assert_irreducible: bool,
    /// Take Z(f) to have dimension n - 1.
    #[arg(long)]
    pub assert_codim1: bool,
    /// Random lines tried by the irreducibility test.
    #[arg(long, default_value_t = 16)]
    pub attempts: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Parse and print the canonical polynomial and E-polynomial.
    Canon(ExprArg),
    /// Candidate hyperplanes from pairs of U-exponent vectors.
    Hyperplanes(ExprArg),
    /// Codimension-1 component classification.
    Classify(ClassifyArgs),
    /// Classification for P in x and u1 only.
    Classify1e(ClassifyArgs),
    /// Certified real roots of f in one variable.
    Roots {
        #[command(flatten)]
        input: ExprArg,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        domain: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Quadtree cells that may meet Z(f), for f in two variables.
    Sample2d {
        #[command(flatten)]
        input: ExprArg,
        #[arg(long = "box", num_args = 4, value_names = ["X_LO", "X_HI", "Y_LO", "Y_HI"], allow_hyphen_values = true)]
        bounds: Option<Vec<f64>>,
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// Transversality of Z(P) and the graph u1 = exp(x1) over a root box.
    Transversal {
        #[command(flatten)]
        input: ExprArg,
        /// Enclosure of x1.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, required = true)]
        root: Vec<f64>,
        /// Enclosure of the next coordinate x2, x3, ..; repeat per coordinate.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, action = ArgAction::Append)]
        coord: Vec<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run the embedded reference corpus against its frozen expectations.
    VerifyPaper,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Canon(_) => "canon",
            Command::Hyperplanes(_) => "hyperplanes",
            Command::Classify(_) => "classify",
            Command::Classify1e(_) => "classify1e",
            Command::Roots { .. } => "roots",
            Command::Sample2d { .. } => "sample2d",
            Command::Transversal { .. } => "transversal",
            Command::VerifyPaper => "verify-paper",
        }
    }
}

impl Cli {
    pub fn mode(&self) -> Mode {
        if self.rigorous {
            Mode::Rigorous
        } else {
            Mode::Fast
        }
    }
}

/// Outcome of a command before it is wrapped into a report.
pub struct Outcome {
    pub input: String,
    pub result: Value,
    pub log: Vec<HypothesisEntry>,
    pub summary: String,
    /// Exit code for a report that was produced but signals failure.
    pub exit_code: i32,
}

impl Outcome {
    fn ok(input: String, result: Value, summary: String) -> Self {
        Outcome {
            input,
            result,
            log: Vec::new(),
            summary,
            exit_code: 0,
        }
    }
}

fn parse(cli: &Cli, text: &str) -> Result<Poly, CliError> {
    Ok(parse_lifted(text, cli.ambient)?)
}

fn interval(v: &[f64], what: &str) -> Result<Interval, CliError> {
    match v {
        [lo, hi] if lo.is_finite() && hi.is_finite() && lo <= hi => Ok(Interval::new(*lo, *hi)),
        _ => Err(CliError::input(format!("{what}: need finite LO <= HI"))),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Candidate {
    normal: Vec<i64>,
    equation: String,
}

fn classify_options(cli: &Cli, a: &ClassifyArgs) -> ClassifyOptions {
    ClassifyOptions {
        assert_irreducible: a.assert_irreducible,
        assert_codim1: a.assert_codim1,
        attempts: a.attempts,
        seed: cli.seed,
        mode: cli.mode(),
    }
}

/// Runs one command and builds its report.
pub fn execute(cli: &Cli) -> Result<(Report, Outcome), CliError> {
    let start = Instant::now();
    let out = dispatch(cli)?;
    let timings = cli.timings.then(|| Timings {
        total_ms: start.elapsed().as_secs_f64() * 1e3,
    });
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: cli.command.name().into(),
        input: out.input.clone(),
        result: out.result.clone(),
        hypothesis_log: out.log.clone(),
        seed: cli.seed,
        mode: cli.mode(),
        timings,
    };
    Ok((report, out))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let mode = cli.mode();
    match &cli.command {
        Command::Canon(a) => {
            let p = parse(cli, &a.expr)?;
            let f = expand_e(&p);
            let result = json!({
                "ambient": p.ambient(),
                "polynomial": p.to_string(),
                "epolynomial": f.to_string(),
                "identicallyZero": f.is_identically_zero(),
            });
            Ok(Outcome::ok(p.to_string(), result, format!("canon: {p}")))
        }
        Command::Hyperplanes(a) => {
            let p = parse(cli, &a.expr)?;
            let u = u_exponent_vectors(&p);
            let set = candidate_hyperplanes(&p);
            let m = u.len();
            let cands: Vec<Candidate> = set
                .hyperplanes
                .iter()
                .map(|h| Candidate {
                    normal: h.normal().to_vec(),
                    equation: h.to_string(),
                })
                .collect();
            let summary = if set.degenerate {
                "hyperplanes: undefined (at most one U-monomial)".to_string()
            } else {
                format!("hyperplanes: {} candidates", cands.len())
            };
            let result = json!({
                "ambient": p.ambient(),
                "uExponents": u,
                "degenerate": set.degenerate,
                "pairBound": m * m.saturating_sub(1) / 2,
                "candidates": cands,
            });
            Ok(Outcome::ok(p.to_string(), result, summary))
        }
        Command::Classify(a) | Command::Classify1e(a) => {
            let p = parse(cli, &a.input.expr)?;
            let opts = classify_options(cli, a);
            let r = if matches!(cli.command, Command::Classify(_)) {
                classify_codim1(&p, &opts)?
            } else {
                classify_single_exp(&p, &opts)?
            };
            let summary = format!(
                "{}: {:?}, {} hyperplane(s), {} rejected, {:?}",
                cli.command.name(),
                r.verdict,
                r.hyperplanes.len(),
                r.rejected.len(),
                r.conditionality
            );
            let log = r.hypothesis_log.clone();
            let mut out = Outcome::ok(p.to_string(), serde_json::to_value(&r)?, summary);
            out.log = log;
            Ok(out)
        }
        Command::Roots { input, domain, tol } => {
            let p = parse(cli, &input.expr)?;
            let f = expand_e(&p);
            if f.ambient() != 1 {
                return Err(CliError::input(format!(
                    "roots needs one variable, input has {}",
                    f.ambient()
                )));
            }
            let dom = match domain {
                Some(d) => interval(d, "--domain")?,
                None => default_domain(&f),
            };
            let roots = isolate_roots_1d(&f, dom, *tol, mode)?;
            let certified = roots.iter().filter(|r| r.is_certified()).count();
            let summary = format!(
                "roots: {certified} certified, {} uncertified on [{}, {}]",
                roots.len() - certified,
                dom.lo,
                dom.hi
            );
            let result = json!({
                "function": f.to_string(),
                "domain": dom,
                "defaultDomain": domain.is_none(),
                "tol": tol,
                "certifiedCount": certified,
                "uncertifiedCount": roots.len() - certified,
                "roots": roots,
            });
            Ok(Outcome::ok(p.to_string(), result, summary))
        }
        Command::Sample2d { input, bounds, depth } => {
            let p = parse(cli, &input.expr)?;
            let f = expand_e(&p);
            let b = match bounds {
                Some(v) => IntervalBox::new(vec![interval(&v[0..2], "--box")?, interval(&v[2..4], "--box")?]),
                None => IntervalBox::new(vec![Interval::new(-2.0, 2.0), Interval::new(-2.0, 2.0)]),
            };
            let cells = sample_zero_cells_2d(&f, &b, *depth, mode)?;
            let scale = f64::from(1u32 << *depth);
            let widths = [b.sides()[0].width() / scale, b.sides()[1].width() / scale];
            let summary = format!("sample2d: {} cells at depth {depth}", cells.len());
            let result = json!({
                "function": f.to_string(),
                "box": b,
                "depth": depth,
                "cellWidth": widths,
                "count": cells.len(),
                "cells": cells,
            });
            Ok(Outcome::ok(p.to_string(), result, summary))
        }
        Command::Transversal {
            input,
            root,
            coord,
            tol,
        } => {
            let p = parse(cli, &input.expr)?;
            let mut sides = vec![interval(root, "--root")?];
            for c in coord.chunks(2) {
                sides.push(interval(c, "--coord")?);
            }
            let b = IntervalBox::new(sides);
            let r = check_transversality(&p, &b, *tol, mode)?;
            let summary = format!(
                "transversal: {:?}, rank >= {}, margin {:.6}",
                r.verdict, r.jacobian_rank_lower_bound, r.tangency_margin
            );
            let mut out = Outcome::ok(p.to_string(), serde_json::to_value(&r)?, summary);
            out.log = vec![HypothesisEntry::new(
                "nonzeroFirstCoordinate",
                HypothesisStatus::Checked,
                format!("x1 enclosure {} excludes 0", b.sides()[0]),
            )];
            Ok(out)
        }
        Command::VerifyPaper => {
            let v = corpus::verify(cli.seed, mode, cli.timings)?;
            let failed = v.failed;
            let summary = format!("verify-paper: {} passed, {failed} failed", v.passed);
            let mut out = Outcome::ok("embedded corpus".into(), serde_json::to_value(&v)?, summary);
            if failed > 0 {
                out.exit_code = crate::report::ErrorKind::Internal.exit_code();
            }
            Ok(out)
        }
    }
}
