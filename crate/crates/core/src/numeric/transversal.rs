//! Non-tangency of `Z(p)` and the graph `{u1 = e^{x1}}` at a lifted root.
//!
//! The local equations of `Z(p)` at the point are taken from the first level of
//! the derivative tower of `p` (`{p}`, then all first partials, then all second
//! partials) whose Jacobian has a certified nonzero minor. The intersection is
//! transverse when adjoining the graph row `(-e^{x1}, 0, .., 0, 1)` raises the
//! certified rank.

use serde::Serialize;

use super::eval::{eval_poly, Scalar};
use super::interval::{Interval, IntervalBox};
use super::rigorous::RatInterval;
use super::Mode;
use crate::error::{Error, Result};
use crate::poly::{Poly, Var};

/// Deepest derivative level tried for the local equations.
pub const MAX_LEVEL: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TransversalityVerdict {
    Transverse,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransversalityReport {
    /// Midpoint of the lifted enclosure, `(x_1..x_n, u_1)`.
    pub point: Vec<f64>,
    pub jacobian_rank_lower_bound: usize,
    /// Sine of the angle between the graph normal and the span of the chosen
    /// rows, at the midpoint.
    pub tangency_margin: f64,
    pub verdict: TransversalityVerdict,
    /// Derivative level that supplied the local equations.
    pub level: usize,
    /// Enclosure of the decisive stacked minor, when one was found.
    pub decisive_minor: Option<Interval>,
    pub tolerance: f64,
}

/// Variables of the single-exponential system, in column order.
fn columns(n: usize) -> Vec<Var> {
    let mut v: Vec<Var> = (0..n).map(Var::X).collect();
    v.push(Var::U(0));
    v
}

fn system(p: &Poly, level: usize, cols: &[Var]) -> Vec<Poly> {
    let mut polys = vec![p.clone()];
    for _ in 0..level {
        polys = polys
            .iter()
            .flat_map(|q| cols.iter().map(|&v| q.derivative(v)).collect::<Vec<_>>())
            .filter(|q| !q.is_zero())
            .collect();
        polys.sort_by_key(|q| q.to_string());
        polys.dedup();
    }
    polys
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
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

/// Interval determinant by cofactor expansion (matrices are at most a few rows).
fn det<S: Scalar>(m: &[Vec<S>]) -> S {
    match m.len() {
        0 => S::from_rat(&crate::poly::rat(1)),
        1 => m[0][0].clone(),
        k => {
            let mut acc = S::zero();
            for c in 0..k {
                let minor: Vec<Vec<S>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let t = m[0][c].mul(&det(&minor));
                acc = if c % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

fn submatrix<S: Clone>(rows: &[Vec<S>], ri: &[usize], ci: &[usize]) -> Vec<Vec<S>> {
    ri.iter().map(|&r| ci.iter().map(|&c| rows[r][c].clone()).collect()).collect()
}

/// First `(rows, cols)` selection of size `k` whose minor excludes zero.
fn certified_minor<S: Scalar>(rows: &[Vec<S>], k: usize, fixed_row: Option<usize>) -> Option<(Vec<usize>, Vec<usize>, Interval)> {
    let ncols = rows.first()?.len();
    let row_sets: Vec<Vec<usize>> = match fixed_row {
        Some(f) => combinations(rows.len() - 1, k - 1)
            .into_iter()
            .map(|mut s| {
                s.push(f);
                s
            })
            .collect(),
        None => combinations(rows.len(), k),
    };
    for ri in &row_sets {
        for ci in combinations(ncols, k) {
            let d = det(&submatrix(rows, ri, &ci)).to_interval();
            if d.excludes_zero() {
                return Some((ri.clone(), ci, d));
            }
        }
    }
    None
}

fn jacobian<S: Scalar>(polys: &[Poly], cols: &[Var], point: &[S]) -> Vec<Vec<S>> {
    polys
        .iter()
        .map(|q| cols.iter().map(|&v| eval_poly(&q.derivative(v), point)).collect())
        .collect()
}

/// Sine of the angle between `g` and the span of `rows`.
fn margin(rows: &[Vec<f64>], g: &[f64]) -> f64 {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            basis.push(v.iter().map(|x| x / norm).collect());
        }
    }
    let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut v: Vec<f64> = g.iter().map(|x| x / gn).collect();
    for b in &basis {
        let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
        v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
    }
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Checks transversality at the lift of the enclosure `x` (one interval per
/// `x_i`) of a zero of `p(x, e^{x_1})`, where `p` involves `U_1` only.
pub fn check_transversality(p: &Poly, x: &IntervalBox, tol: f64, mode: Mode) -> Result<TransversalityReport> {
    let n = p.ambient();
    if n == 0 {
        return Err(Error::ConstantInput);
    }
    if x.dim() != n {
        return Err(Error::DimensionMismatch { left: n, right: x.dim() });
    }
    if p.terms().any(|(m, _)| m.u_exp[1..].iter().any(|&e| e > 0)) {
        return Err(Error::WrongDriver("transversality needs a polynomial in x and u1 only".into()));
    }
    if x.sides()[0].contains_zero() {
        return Err(Error::Precondition("the root enclosure contains x1 = 0".into()));
    }
    match mode {
        Mode::Fast => check_in::<Interval>(p, x, tol),
        Mode::Rigorous => check_in::<RatInterval>(p, x, tol),
    }
}

fn lift<S: Scalar>(x: &[Interval], n: usize) -> Vec<S> {
    let mut pt: Vec<S> = x.iter().map(S::from_interval).collect();
    pt.push(S::from_interval(&x[0]).exp());
    pt.extend((1..n).map(|_| S::zero()));
    pt
}

fn check_in<S: Scalar>(p: &Poly, x: &IntervalBox, tol: f64) -> Result<TransversalityReport> {
    let n = p.ambient();
    let cols = columns(n);
    let zbox: Vec<S> = lift(x.sides(), n);
    if eval_poly(p, &zbox).to_interval().excludes_zero() {
        return Err(Error::Precondition("the enclosure contains no zero of the lifted system".into()));
    }
    let mid: Vec<Interval> = x.mid().into_iter().map(Interval::point).collect();
    let zmid: Vec<f64> = lift::<Interval>(&mid, n).iter().map(|v| v.mid()).collect();
    let mut point: Vec<f64> = zmid[..n].to_vec();
    point.push(zmid[n]);

    let mut graph: Vec<S> = (0..=n).map(|_| S::zero()).collect();
    graph[0] = S::zero().sub(&S::from_interval(&x.sides()[0]).exp());
    graph[n] = S::from_rat(&crate::poly::rat(1));
    let midpt: Vec<Interval> = {
        let mut v: Vec<Interval> = zmid.iter().map(|&z| Interval::point(z)).collect();
        v.truncate(2 * n);
        v
    };

    for level in 0..=MAX_LEVEL {
        let polys = system(p, level, &cols);
        if polys.is_empty() {
            break;
        }
        let jac: Vec<Vec<S>> = jacobian(&polys, &cols, &zbox);
        let mut rank = 0;
        let mut chosen: Vec<usize> = Vec::new();
        for k in (1..=polys.len().min(n + 1)).rev() {
            if let Some((ri, _, _)) = certified_minor(&jac, k, None) {
                rank = k;
                chosen = ri;
                break;
            }
        }
        if rank == 0 {
            continue;
        }
        let mut stacked: Vec<Vec<S>> = chosen.iter().map(|&r| jac[r].clone()).collect();
        stacked.push(graph.clone());
        let graph_idx = stacked.len() - 1;
        let decisive = if rank < n + 1 {
            certified_minor(&stacked, rank + 1, Some(graph_idx)).map(|(_, _, d)| d)
        } else {
            None
        };

        let jm: Vec<Vec<f64>> = jacobian::<Interval>(&polys, &cols, &midpt)
            .into_iter()
            .map(|row| row.iter().map(Interval::mid).collect())
            .collect();
        let rows_mid: Vec<Vec<f64>> = chosen.iter().map(|&r| jm[r].clone()).collect();
        let mut g = vec![0.0; n + 1];
        g[0] = -zmid[n];
        g[n] = 1.0;
        let m = margin(&rows_mid, &g);
        let certified = decisive.is_some();
        let verdict = if certified && m > tol {
            TransversalityVerdict::Transverse
        } else {
            TransversalityVerdict::Undetermined
        };
        return Ok(TransversalityReport {
            point,
            jacobian_rank_lower_bound: if certified { rank + 1 } else { rank },
            tangency_margin: m,
            verdict,
            level,
            decisive_minor: decisive,
            tolerance: tol,
        });
    }
    Ok(TransversalityReport {
        point,
        jacobian_rank_lower_bound: 0,
        tangency_margin: 0.0,
        verdict: TransversalityVerdict::Undetermined,
        level: MAX_LEVEL,
        decisive_minor: None,
        tolerance: tol,
    })
}
