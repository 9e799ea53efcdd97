//! Component classification drivers and the irreducibility oracle.
//!
//! `classify_codim1` decides which candidate hyperplanes are components of
//! `Z(f)` and labels the outcome with the hypotheses it rests on. In several
//! exponentials (`n >= 2`, at least two `U` variables) the statement that no
//! other codimension-1 component exists is conditional on Schanuel's
//! conjecture; the report carries that as data.
//!
//! `classify_single_exp` handles `P` in `X` and `U_1` only, where the analysis is
//! unconditional: the only possible hyperplane is `X_1 = 0`, and the exact slice
//! `P(0, X', 1)` describes what `Z(f)` can contain on it.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::epoly::{expand_e, EPoly};
use crate::error::{Error, Result};
use crate::factor::factor_univariate;
use crate::hyperplanes::{candidate_hyperplanes, u_exponent_vectors, Hyperplane};
use crate::numeric::{
    default_domain, isolate_roots_1d, sample_zero_cells_2d, Interval, IntervalBox, Mode, RootCert, RootKind,
};
use crate::poly::{fmt_rat, Mono, Poly, Rat, Var};
use crate::upoly::{fmt_in, UniPoly};

/// Largest coordinate height used for random lines.
pub const LINE_HEIGHT: i64 = 20;
/// Kronecker images above this degree are not factored.
pub const KRONECKER_MAX_DEGREE: usize = 240;
/// Subset search limit for Kronecker recombination.
pub const KRONECKER_MAX_FACTORS: usize = 14;
/// Points per hyperplane in the numeric cross-check.
pub const HYPERPLANE_SAMPLES: usize = 50;
/// Bound on `|f|` at sampled hyperplane points.
pub const HYPERPLANE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IrredStatus {
    Irreducible,
    Reducible,
    Unknown,
}

/// A specialization `v_s = a_s t + b_s` of every variable slot `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub slope: Vec<Rat>,
    pub offset: Vec<Rat>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IrredVerdict {
    pub status: IrredStatus,
    /// How the verdict was reached: `degreeOne`, `monomialContent`, `randomLine`,
    /// `kronecker` or `exhausted`.
    pub method: String,
    pub witness: Option<String>,
    #[serde(skip)]
    pub factor: Option<Poly>,
    #[serde(skip)]
    pub line: Option<Line>,
}

impl IrredVerdict {
    fn new(status: IrredStatus, method: &str, witness: Option<String>) -> Self {
        IrredVerdict {
            status,
            method: method.into(),
            witness,
            factor: None,
            line: None,
        }
    }
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let n = rng.gen_range(-LINE_HEIGHT..=LINE_HEIGHT);
    let d = rng.gen_range(1..=LINE_HEIGHT);
    Rat::new(n.into(), d.into())
}

/// Image of `p` under the line specialization.
pub fn line_image(p: &Poly, line: &Line) -> UniPoly {
    let n = p.ambient();
    let mut powers: Vec<Vec<UniPoly>> = (0..2 * n)
        .map(|s| vec![UniPoly::constant(Rat::one()), UniPoly::linear(line.slope[s].clone(), line.offset[s].clone())])
        .collect();
    let mut out = UniPoly::zero();
    for (m, c) in p.terms() {
        let mut t = UniPoly::constant(c.clone());
        for s in 0..2 * n {
            let e = m.exp(Var::from_slot(s, n)) as usize;
            if e == 0 {
                continue;
            }
            while powers[s].len() <= e {
                let next = powers[s].last().unwrap().mul(&powers[s][1]);
                powers[s].push(next);
            }
            t = t.mul(&powers[s][e]);
        }
        out = out.add(&t);
    }
    out
}

fn fmt_line(line: &Line, p: &Poly) -> String {
    let n = p.ambient();
    p.variables()
        .iter()
        .map(|v| {
            let s = v.slot(n);
            let l = UniPoly::linear(line.slope[s].clone(), line.offset[s].clone());
            format!("{v} = {}", fmt_in(&l, "t"))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Tests irreducibility of `p` over `Q`.
///
/// `Irreducible` is certified either by a line on which the image keeps the
/// total degree and is irreducible (a factorization of `p` would specialize to
/// one of the image), or by an exhaustive Kronecker-substitution search.
/// `Reducible` always carries an exact factor.
pub fn irreducibility_oracle(p: &Poly, attempts: usize, seed: u64) -> Result<IrredVerdict> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Err(Error::ConstantInput);
    }
    let n = p.ambient();
    let deg = p.total_degree();
    if deg == 1 {
        return Ok(IrredVerdict::new(IrredStatus::Irreducible, "degreeOne", None));
    }
    let content = p.monomial_content();
    if !content.is_one() {
        let var = (0..2 * n)
            .map(|s| Var::from_slot(s, n))
            .find(|&v| content.exp(v) > 0)
            .unwrap();
        let mut v = IrredVerdict::new(IrredStatus::Reducible, "monomialContent", Some(format!("factor {var}")));
        v.factor = Some(Poly::var(n, var));
        return Ok(v);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let line = Line {
            slope: (0..2 * n).map(|_| random_rat(&mut rng)).collect(),
            offset: (0..2 * n).map(|_| random_rat(&mut rng)).collect(),
        };
        let image = line_image(p, &line);
        if image.degree() != Some(deg as usize) {
            continue;
        }
        if factor_univariate(&image)?.is_irreducible() {
            let witness = format!("{}; image {}", fmt_line(&line, p), fmt_in(&image, "t"));
            let mut v = IrredVerdict::new(IrredStatus::Irreducible, "randomLine", Some(witness));
            v.line = Some(line);
            return Ok(v);
        }
    }
    kronecker(p)
}

fn kronecker(p: &Poly) -> Result<IrredVerdict> {
    let n = p.ambient();
    let vars = p.variables();
    let base = vars.iter().map(|&v| p.degree_in(v)).max().unwrap_or(0) as usize + 1;
    let mut weights = Vec::with_capacity(vars.len());
    let mut w = 1usize;
    for _ in &vars {
        weights.push(w);
        w = match w.checked_mul(base) {
            Some(x) => x,
            None => return Ok(IrredVerdict::new(IrredStatus::Unknown, "exhausted", None)),
        };
    }
    let image_deg: usize = vars
        .iter()
        .zip(&weights)
        .map(|(&v, &w)| p.degree_in(v) as usize * w)
        .sum();
    if image_deg > KRONECKER_MAX_DEGREE {
        return Ok(IrredVerdict::new(
            IrredStatus::Unknown,
            "exhausted",
            Some(format!("Kronecker image degree {image_deg} above limit")),
        ));
    }
    let mut coeffs = vec![Rat::zero(); image_deg + 1];
    for (m, c) in p.terms() {
        let e: usize = vars.iter().zip(&weights).map(|(&v, &w)| m.exp(v) as usize * w).sum();
        coeffs[e] += c;
    }
    let image = UniPoly::new(coeffs);
    let fac = factor_univariate(&image)?;
    let items: Vec<&UniPoly> = fac
        .factors
        .iter()
        .flat_map(|(f, k)| std::iter::repeat_n(f, *k as usize))
        .collect();
    if items.len() > KRONECKER_MAX_FACTORS {
        return Ok(IrredVerdict::new(
            IrredStatus::Unknown,
            "exhausted",
            Some(format!("Kronecker image has {} factors", items.len())),
        ));
    }
    let inverse = |u: &UniPoly| -> Poly {
        let terms = u.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, c)| {
            let mut m = Mono::one(n);
            let mut rest = e;
            for (&v, _) in vars.iter().zip(&weights) {
                *m.exp_mut(v) = (rest % base) as u32;
                rest /= base;
            }
            (m, c.clone())
        });
        Poly::from_terms(n, terms)
    };
    let r = items.len();
    let mut seen = BTreeSet::new();
    for size in 1..=r / 2 {
        for subset in subsets(r, size) {
            let prod = subset
                .iter()
                .fold(UniPoly::constant(Rat::one()), |acc, &i| acc.mul(items[i]));
            if !seen.insert(prod.coeffs().to_vec()) {
                continue;
            }
            let g = inverse(&prod);
            if g.is_constant() || g.total_degree() >= p.total_degree() {
                continue;
            }
            if let Some(h) = p.div_exact(&g) {
                if !h.is_constant() {
                    let mut v = IrredVerdict::new(IrredStatus::Reducible, "kronecker", Some(format!("factor {g}")));
                    v.factor = Some(g);
                    return Ok(v);
                }
            }
        }
    }
    Ok(IrredVerdict::new(
        IrredStatus::Irreducible,
        "kronecker",
        Some(format!("no factor among {r} Kronecker image factors")),
    ))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    IrreducibleSet,
    HyperplaneComponents,
    /// Single exponential, plane case: `Z(f)` reduces to points of the exact slice.
    SliceComponents,
    Inconclusive,
}

/// Ordered from strongest to weakest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Conditionality {
    Unconditional,
    ConditionalOnSchanuel,
    ConditionalOnAssertedHypotheses,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HypothesisStatus {
    /// Verified by an exact computation.
    Checked,
    /// Supported by the polynomial irreducibility test over `Q`.
    CheckedPolynomialProxy,
    Asserted,
    Unverified,
    Failed,
    /// Numeric evidence only; recorded but not relied on.
    Heuristic,
    NotRequired,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HypothesisEntry {
    pub hypothesis: String,
    pub status: HypothesisStatus,
    pub detail: String,
}

impl HypothesisEntry {
    pub fn new(hypothesis: &str, status: HypothesisStatus, detail: impl Into<String>) -> Self {
        HypothesisEntry {
            hypothesis: hypothesis.into(),
            status,
            detail: detail.into(),
        }
    }

    fn weakens(&self) -> bool {
        matches!(
            self.status,
            HypothesisStatus::Asserted | HypothesisStatus::Unverified | HypothesisStatus::Failed
        )
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HyperplaneCert {
    pub hyperplane: Hyperplane,
    pub equation: String,
    /// The restriction is the zero E-polynomial.
    pub symbolic: bool,
    pub numeric_max_abs: f64,
    pub numeric_samples: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RejectedCandidate {
    pub hyperplane: Hyperplane,
    pub equation: String,
    pub restriction: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SliceFactor {
    pub factor: String,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SliceComponent {
    pub description: String,
    pub factor: String,
    /// Exact coordinate when rational.
    pub exact: Option<String>,
    pub enclosure: Interval,
    pub certified: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SliceReport {
    /// `P(0, x2, .., xn, 1)`.
    pub polynomial: String,
    pub identically_zero: bool,
    pub factors: Vec<SliceFactor>,
    pub components: Vec<SliceComponent>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentReport {
    pub driver: String,
    pub ambient: usize,
    pub verdict: Verdict,
    pub hyperplanes: Vec<HyperplaneCert>,
    pub rejected: Vec<RejectedCandidate>,
    pub degenerate: bool,
    pub residual: String,
    pub conditionality: Conditionality,
    /// The verdict relies on Schanuel's conjecture when several exponentials interact.
    pub requires_schanuel: bool,
    pub hypothesis_log: Vec<HypothesisEntry>,
    pub irreducibility: Option<IrredVerdict>,
    pub roots: Vec<RootCert>,
    pub slice: Option<SliceReport>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub assert_irreducible: bool,
    pub assert_codim1: bool,
    pub attempts: usize,
    pub seed: u64,
    pub mode: Mode,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            assert_irreducible: false,
            assert_codim1: false,
            attempts: 16,
            seed: 0,
            mode: Mode::Fast,
        }
    }
}

/// Point of `{m . x = 0}` with free coordinates in `[-3, 3]`, scaled into `[-3, 3]^n`.
fn sample_hyperplane_point(h: &Hyperplane, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let free: Vec<f64> = (1..h.dim()).map(|_| rng.gen_range(-3.0..=3.0)).collect();
    let mut x = h.embed(&free);
    let m = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m > 3.0 {
        x.iter_mut().for_each(|v| *v *= 3.0 / m);
    }
    x
}

/// Sorts candidates into certified components and rejected ones.
pub fn certify_candidates(
    f: &EPoly,
    candidates: &[Hyperplane],
    seed: u64,
) -> Result<(Vec<HyperplaneCert>, Vec<RejectedCandidate>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_cafe);
    let mut certs = Vec::new();
    let mut rejected = Vec::new();
    for h in candidates {
        let r = f.restrict_to_hyperplane(h)?;
        if r.is_identically_zero() {
            let max = (0..HYPERPLANE_SAMPLES)
                .map(|_| f.eval_f64(&sample_hyperplane_point(h, &mut rng)).abs())
                .fold(0.0, f64::max);
            certs.push(HyperplaneCert {
                hyperplane: h.clone(),
                equation: h.to_string(),
                symbolic: true,
                numeric_max_abs: max,
                numeric_samples: HYPERPLANE_SAMPLES,
            });
        } else {
            rejected.push(RejectedCandidate {
                hyperplane: h.clone(),
                equation: h.to_string(),
                restriction: r.to_string(),
            });
        }
    }
    Ok((certs, rejected))
}

fn irreducibility_entry(
    p: &Poly,
    opts: &ClassifyOptions,
    log: &mut Vec<HypothesisEntry>,
) -> Result<(Option<IrredVerdict>, bool)> {
    const NAME: &str = "irreducibleAlgebraicSet";
    if opts.assert_irreducible {
        log.push(HypothesisEntry::new(NAME, HypothesisStatus::Asserted, "asserted by the caller"));
        return Ok((None, false));
    }
    if p.is_constant() {
        log.push(HypothesisEntry::new(NAME, HypothesisStatus::NotRequired, "constant polynomial"));
        return Ok((None, false));
    }
    let v = irreducibility_oracle(p, opts.attempts, opts.seed)?;
    let detail = format!(
        "polynomial irreducibility over Q via {}{}",
        v.method,
        v.witness.as_ref().map(|w| format!(": {w}")).unwrap_or_default()
    );
    let (status, reducible) = match v.status {
        IrredStatus::Irreducible => (HypothesisStatus::CheckedPolynomialProxy, false),
        IrredStatus::Reducible => (HypothesisStatus::Failed, true),
        IrredStatus::Unknown => (HypothesisStatus::Unverified, false),
    };
    log.push(HypothesisEntry::new(NAME, status, detail));
    Ok((Some(v), reducible))
}

fn roots_1d(f: &EPoly, mode: Mode, notes: &mut Vec<String>) -> Result<Vec<RootCert>> {
    let dom = default_domain(f);
    notes.push(format!(
        "roots searched on the default domain [{}, {}]; zeros outside it are not excluded",
        dom.lo, dom.hi
    ));
    isolate_roots_1d(f, dom, 1e-9, mode)
}

fn distinct_u_variables(p: &Poly) -> usize {
    p.variables().iter().filter(|v| matches!(v, Var::U(_))).count()
}

const RESIDUAL_HYPERPLANES: &str =
    "closure of Z(f) minus the listed hyperplanes; not characterized, contains no further codimension-1 component";

/// Codimension-1 classification of `Z(E(p))`.
pub fn classify_codim1(p: &Poly, opts: &ClassifyOptions) -> Result<ComponentReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.ambient();
    let f = expand_e(p);
    let mut log = Vec::new();
    let mut notes = Vec::new();
    let cands = candidate_hyperplanes(p);
    let mut report = ComponentReport {
        driver: "codim1".into(),
        ambient: n,
        verdict: Verdict::Inconclusive,
        hyperplanes: Vec::new(),
        rejected: Vec::new(),
        degenerate: cands.degenerate,
        residual: String::new(),
        conditionality: Conditionality::Unconditional,
        requires_schanuel: false,
        hypothesis_log: Vec::new(),
        irreducibility: None,
        roots: Vec::new(),
        slice: None,
        notes: Vec::new(),
    };

    if cands.degenerate {
        // f = A(x) e^{d.x} and e^{d.x} has no zeros, so Z(f) = Z(A).
        let groups = p.u_groups();
        let (d, a) = groups.iter().next().expect("nonzero polynomial");
        notes.push(format!(
            "single U-monomial: f = ({a}) * exp(d.x) with d = {d:?}, so Z(f) is the algebraic set Z({a})"
        ));
        if a.is_constant() {
            report.verdict = Verdict::Inconclusive;
            report.residual = "Z(f) is empty".into();
            log.push(HypothesisEntry::new("irreducibleAlgebraicSet", HypothesisStatus::NotRequired, "empty set"));
        } else {
            let (v, reducible) = irreducibility_entry(a, opts, &mut log)?;
            log.push(HypothesisEntry::new(
                "codimensionOne",
                HypothesisStatus::NotRequired,
                "algebraic case",
            ));
            report.irreducibility = v;
            report.verdict = if reducible {
                Verdict::Inconclusive
            } else {
                Verdict::IrreducibleSet
            };
            report.residual = "none".into();
            if n == 1 {
                report.roots = roots_1d(&f, opts.mode, &mut notes)?;
            }
        }
        return Ok(finish(report, log, notes, Conditionality::Unconditional));
    }

    let (v, reducible) = irreducibility_entry(p, opts, &mut log)?;
    report.irreducibility = v;
    let (certs, rejected) = certify_candidates(&f, &cands.hyperplanes, opts.seed)?;
    let multi = distinct_u_variables(p) >= 2;

    if n == 1 {
        report.roots = roots_1d(&f, opts.mode, &mut notes)?;
        let any_root = !report.roots.is_empty();
        let codim = if opts.assert_codim1 {
            HypothesisEntry::new("codimensionOne", HypothesisStatus::Asserted, "asserted by the caller")
        } else if report.roots.iter().any(RootCert::is_certified) || !certs.is_empty() {
            HypothesisEntry::new("codimensionOne", HypothesisStatus::Checked, "Z(f) contains a certified point")
        } else {
            HypothesisEntry::new("codimensionOne", HypothesisStatus::Unverified, "no zero found")
        };
        log.push(codim);
        if !certs.is_empty() {
            notes.push("in one variable the hyperplane x1 = 0 is the point 0, a zero of f rather than a separate component".into());
        }
        report.hyperplanes = certs;
        report.rejected = rejected;
        report.verdict = if reducible || !any_root {
            Verdict::Inconclusive
        } else {
            Verdict::IrreducibleSet
        };
        report.residual = if any_root { "none".into() } else { "no zeros found".into() };
        return Ok(finish(report, log, notes, Conditionality::Unconditional));
    }

    let codim = if !certs.is_empty() {
        HypothesisEntry::new(
            "codimensionOne",
            HypothesisStatus::Checked,
            format!("Z(f) contains the hyperplane {}", certs[0].equation),
        )
    } else if opts.assert_codim1 {
        HypothesisEntry::new("codimensionOne", HypothesisStatus::Asserted, "asserted by the caller")
    } else if n == 2 {
        let b = IntervalBox::new(vec![Interval::new(-3.0, 3.0), Interval::new(-3.0, 3.0)]);
        let cells = sample_zero_cells_2d(&f, &b, 5, opts.mode)?;
        log.push(HypothesisEntry::new(
            "codimensionOneSampling",
            HypothesisStatus::Heuristic,
            format!("{} zero cells retained at depth 5 on [-3, 3]^2", cells.len()),
        ));
        HypothesisEntry::new("codimensionOne", HypothesisStatus::Unverified, "no exact certificate")
    } else {
        HypothesisEntry::new("codimensionOne", HypothesisStatus::Unverified, "no exact certificate")
    };
    log.push(codim);

    report.verdict = if reducible {
        Verdict::Inconclusive
    } else if certs.is_empty() {
        Verdict::IrreducibleSet
    } else {
        Verdict::HyperplaneComponents
    };
    report.residual = if certs.is_empty() {
        "none".into()
    } else {
        RESIDUAL_HYPERPLANES.into()
    };
    if reducible && !certs.is_empty() {
        notes.push("certified hyperplanes lie in Z(f); the completeness claim needs an irreducible Z(P)".into());
    }
    report.hyperplanes = certs;
    report.rejected = rejected;
    report.requires_schanuel = multi && report.verdict != Verdict::Inconclusive;
    let base = if report.requires_schanuel {
        Conditionality::ConditionalOnSchanuel
    } else {
        Conditionality::Unconditional
    };
    Ok(finish(report, log, notes, base))
}

fn finish(
    mut report: ComponentReport,
    log: Vec<HypothesisEntry>,
    notes: Vec<String>,
    base: Conditionality,
) -> ComponentReport {
    report.conditionality = if log.iter().any(HypothesisEntry::weakens) {
        Conditionality::ConditionalOnAssertedHypotheses
    } else {
        base
    };
    report.hypothesis_log = log;
    report.notes = notes;
    report
}

/// Real roots of a univariate slice factor, exact when linear.
fn factor_components(factor: &UniPoly, name: &str, mode: Mode) -> Result<Vec<SliceComponent>> {
    let text = fmt_in(factor, name);
    if factor.degree() == Some(1) {
        let c = factor.coeffs();
        let r = -&c[0] / &c[1];
        let enclosure = crate::numeric::eval::rat_enclosure(&r);
        return Ok(vec![SliceComponent {
            description: format!("x1 = 0, {name} = {}", fmt_rat(&r)),
            factor: text,
            exact: Some(fmt_rat(&r)),
            enclosure,
            certified: true,
        }]);
    }
    // Cauchy bound on the real roots
    let lc = factor.leading();
    let bound = factor.coeffs()[..factor.coeffs().len() - 1]
        .iter()
        .map(|c| num_traits::ToPrimitive::to_f64(&(c / &lc).abs()).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
        + 1.0;
    let e = expand_e(&factor.to_poly(1, Var::X(0)));
    let roots = isolate_roots_1d(&e, Interval::new(-bound, bound), 1e-12, mode)?;
    Ok(roots
        .into_iter()
        .map(|r| SliceComponent {
            description: format!("x1 = 0, {name} in {}", r.enclosure),
            factor: text.clone(),
            exact: None,
            enclosure: r.enclosure,
            certified: r.kind != RootKind::UncertifiedTangential,
        })
        .collect())
}

/// Single-exponential classification; `p` may involve `U_1` only.
pub fn classify_single_exp(p: &Poly, opts: &ClassifyOptions) -> Result<ComponentReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.ambient();
    if n == 0 {
        return Err(Error::ConstantInput);
    }
    if let Some(v) = p.variables().into_iter().find(|v| matches!(v, Var::U(i) if *i > 0)) {
        return Err(Error::WrongDriver(format!(
            "single-exponential driver needs U1 only, found {v}; use the codimension-1 driver"
        )));
    }
    let f = expand_e(p);
    let mut log = Vec::new();
    let mut notes = Vec::new();
    log.push(HypothesisEntry::new("singleExponential", HypothesisStatus::Checked, "P involves U1 only"));
    let (irr, reducible) = if p.is_constant() {
        (None, false)
    } else {
        irreducibility_entry(p, opts, &mut log)?
    };
    let m = u_exponent_vectors(p).len();
    notes.push(format!(
        "{m} distinct U-exponent vectors; at most {} candidate hyperplanes, all equal to x1 = 0",
        m * m.saturating_sub(1) / 2
    ));
    notes.push("the general component-count bound involves an absolute constant and is not evaluated".into());
    notes.push("admissible set taken to be Z(P) itself".into());

    let x1 = Hyperplane::coordinate(n, 0);
    let (certs, rejected) = certify_candidates(&f, std::slice::from_ref(&x1), opts.seed)?;
    let mut report = ComponentReport {
        driver: "singleExponential".into(),
        ambient: n,
        verdict: Verdict::Inconclusive,
        hyperplanes: Vec::new(),
        rejected,
        degenerate: m <= 1,
        residual: String::new(),
        conditionality: Conditionality::Unconditional,
        requires_schanuel: false,
        hypothesis_log: Vec::new(),
        irreducibility: irr,
        roots: Vec::new(),
        slice: None,
        notes: Vec::new(),
    };

    if n == 1 {
        report.roots = roots_1d(&f, opts.mode, &mut notes)?;
        if !certs.is_empty() {
            notes.push("in one variable the hyperplane x1 = 0 is the point 0, a zero of f rather than a separate component".into());
        }
        report.hyperplanes = certs;
        let any = !report.roots.is_empty();
        report.verdict = if reducible || !any {
            Verdict::Inconclusive
        } else {
            Verdict::IrreducibleSet
        };
        report.residual = if any { "none".into() } else { "no zeros found".into() };
        return Ok(finish(report, log, notes, Conditionality::Unconditional));
    }

    let s = p
        .substitute_value(Var::X(0), &Rat::zero())
        .substitute_value(Var::U(0), &Rat::one());
    let mut slice = SliceReport {
        polynomial: s.to_string(),
        identically_zero: s.is_zero(),
        factors: Vec::new(),
        components: Vec::new(),
    };
    if s.is_zero() {
        notes.push("the slice polynomial vanishes, so the whole hyperplane x1 = 0 lies in Z(P, X1, U1 - 1)".into());
    } else if n == 2 {
        if s.is_constant() {
            notes.push("the slice polynomial is a nonzero constant; Z(f) has no zeros on x1 = 0".into());
        } else {
            let u = UniPoly::from_poly(&s, Var::X(1)).expect("slice is univariate in x2");
            let fac = factor_univariate(&u)?;
            for (g, k) in &fac.factors {
                slice.factors.push(SliceFactor {
                    factor: fmt_in(g, "x2"),
                    multiplicity: *k,
                });
                slice.components.extend(factor_components(g, "x2", opts.mode)?);
            }
            slice
                .components
                .sort_by(|a, b| a.enclosure.lo.total_cmp(&b.enclosure.lo));
        }
    } else {
        notes.push("slice components in three or more variables are not enumerated".into());
    }

    let certified = !certs.is_empty();
    let off_band_empty = if !certified && n == 2 {
        let depth = 7;
        let b = IntervalBox::new(vec![Interval::new(-4.0, 4.0), Interval::new(-4.0, 4.0)]);
        let w = 8.0 / f64::from(1u32 << depth);
        let cells = sample_zero_cells_2d(&f, &b, depth, opts.mode)?;
        let off = cells.iter().filter(|c| c.sides()[0].mig() > 2.0 * w).count();
        log.push(HypothesisEntry::new(
            "zerosOffHyperplane",
            HypothesisStatus::Heuristic,
            format!("{off} zero cells farther than 2 cell widths from x1 = 0 at depth {depth} on [-4, 4]^2"),
        ));
        off == 0
    } else {
        false
    };

    report.hyperplanes = certs;
    report.verdict = if certified {
        Verdict::HyperplaneComponents
    } else if off_band_empty && !slice.components.is_empty() {
        Verdict::SliceComponents
    } else if reducible {
        Verdict::Inconclusive
    } else {
        Verdict::IrreducibleSet
    };
    report.residual = match report.verdict {
        Verdict::HyperplaneComponents => {
            "Z(f) minus x1 = 0; lower-dimensional, not characterized exactly".into()
        }
        Verdict::SliceComponents => format!(
            "{} point components on x1 = 0; no zeros located off x1 = 0 in the sampled box",
            slice.components.len()
        ),
        _ => "none".into(),
    };
    report.slice = Some(slice);
    Ok(finish(report, log, notes, Conditionality::Unconditional))
}
