//! Certified real root isolation for E-polynomials in one variable.

use serde::Serialize;

use super::eval::EPolyEnclosure;
use super::interval::{Interval, IntervalBox};
use super::Mode;
use crate::epoly::EPoly;
use crate::error::{Error, Result};

/// Off-center split position; dyadic splits then never land on simple rational roots.
const SPLIT_RATIO: f64 = 63.0 / 128.0;

/// Limit on processed intervals before the remainder is reported uncertified.
const MAX_STEPS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootKind {
    SignChange,
    NewtonContraction,
    UncertifiedTangential,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RootCert {
    pub enclosure: Interval,
    pub kind: RootKind,
    /// Bound on `|f|` over the enclosure.
    pub residual_bound: f64,
}

impl RootCert {
    pub fn is_certified(&self) -> bool {
        self.kind != RootKind::UncertifiedTangential
    }
}

/// Default search interval `[-r, r]`, `r = max(8, 2 * coefficient height)`.
pub fn default_domain(f: &EPoly) -> Interval {
    let r = (2.0 * f.coefficient_height()).max(8.0);
    Interval::new(-r, r)
}

fn single(iv: Interval) -> IntervalBox {
    IntervalBox::new(vec![iv])
}

struct Isolator<'a> {
    enc: &'a EPolyEnclosure,
    tol: f64,
}

enum Outcome {
    Discard,
    Root(RootCert),
    Split,
    Leftover,
}

impl Isolator<'_> {
    fn f(&self, iv: Interval) -> Interval {
        self.enc.enclose(&single(iv))
    }

    fn df(&self, iv: Interval) -> Interval {
        self.enc.enclose_derivative(0, &single(iv))
    }

    fn sign(&self, x: f64) -> Option<i8> {
        let v = self.f(Interval::point(x));
        if v.lo > 0.0 {
            Some(1)
        } else if v.hi < 0.0 {
            Some(-1)
        } else {
            None
        }
    }

    fn residual(&self, iv: Interval) -> f64 {
        self.f(iv).mag()
    }

    /// Newton iteration on a monotone interval. Returns the refined interval and
    /// whether strict contraction was observed, or `None` when the interval is
    /// proven root-free.
    fn newton(&self, mut iv: Interval) -> Option<(Interval, bool)> {
        let mut contracted = false;
        for _ in 0..200 {
            if iv.width() <= self.tol && contracted {
                break;
            }
            let d = self.df(iv);
            let m = iv.mid();
            let fm = self.f(Interval::point(m));
            let Some(q) = fm.div(&d) else {
                break;
            };
            let n = Interval::point(m).sub(&q);
            let Some(next) = n.intersect(&iv) else {
                return None;
            };
            if n.interior_of(&iv) {
                contracted = true;
            }
            if next.width() >= iv.width() * 0.999 {
                iv = next;
                break;
            }
            iv = next;
        }
        Some((iv, contracted))
    }

    fn bisect_to_tol(&self, mut iv: Interval, s_lo: i8) -> Interval {
        while iv.width() > self.tol {
            let m = iv.mid();
            if m <= iv.lo || m >= iv.hi {
                break;
            }
            match self.sign(m) {
                Some(s) if s == s_lo => iv = Interval::new(m, iv.hi),
                Some(_) => iv = Interval::new(iv.lo, m),
                None => break,
            }
        }
        iv
    }

    fn process(&self, iv: Interval) -> Outcome {
        if self.f(iv).excludes_zero() {
            return Outcome::Discard;
        }
        let d = self.df(iv);
        if d.excludes_zero() {
            let ends = (self.sign(iv.lo), self.sign(iv.hi));
            if let (Some(a), Some(b)) = ends {
                if a == b {
                    return Outcome::Discard;
                }
            }
            match self.newton(iv) {
                None => return Outcome::Discard,
                Some((n, true)) if n.width() <= self.tol => {
                    return Outcome::Root(RootCert {
                        enclosure: n,
                        kind: RootKind::NewtonContraction,
                        residual_bound: self.residual(n),
                    });
                }
                Some((n, _)) => {
                    let ends = (self.sign(n.lo), self.sign(n.hi));
                    if let (Some(a), Some(b)) = ends {
                        if a != b {
                            let r = self.bisect_to_tol(n, a);
                            return Outcome::Root(RootCert {
                                enclosure: r,
                                kind: RootKind::SignChange,
                                residual_bound: self.residual(r),
                            });
                        }
                    }
                }
            }
        }
        if iv.width() <= self.tol {
            return Outcome::Leftover;
        }
        Outcome::Split
    }

    /// Split point, moved off points where `f` cannot be signed.
    fn split(&self, iv: Interval) -> (Interval, Interval) {
        for r in [SPLIT_RATIO, 0.4, 0.6, 0.3, 0.7] {
            let (a, b) = iv.split_at_ratio(r);
            if a.hi > iv.lo && a.hi < iv.hi && self.sign(a.hi).is_some() {
                return (a, b);
            }
        }
        iv.split_at_ratio(SPLIT_RATIO)
    }
}

/// Isolates the real zeros of `f` in `domain`.
///
/// Returns certified enclosures of width at most `tol` in increasing order,
/// together with merged `UncertifiedTangential` ranges where the derivative
/// could not be separated from zero.
pub fn isolate_roots_1d(f: &EPoly, domain: Interval, tol: f64, mode: Mode) -> Result<Vec<RootCert>> {
    if f.is_identically_zero() {
        return Err(Error::IdenticallyZero);
    }
    if f.ambient() != 1 {
        return Err(Error::DimensionMismatch {
            left: f.ambient(),
            right: 1,
        });
    }
    if !(domain.lo.is_finite() && domain.hi.is_finite()) {
        return Err(Error::InvalidArgument("root domain must be finite".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let enc = EPolyEnclosure::new(f, mode);
    let iso = Isolator { enc: &enc, tol };
    let domain = if domain.width() == 0.0 {
        domain
    } else {
        // keep endpoint zeros inside the processed interval
        Interval::new(domain.lo.next_down(), domain.hi.next_up())
    };

    let mut found: Vec<RootCert> = Vec::new();
    let mut leftovers: Vec<Interval> = Vec::new();
    let mut stack = vec![domain];
    let mut steps = 0;
    while let Some(iv) = stack.pop() {
        steps += 1;
        if steps > MAX_STEPS {
            leftovers.push(iv);
            leftovers.append(&mut stack);
            break;
        }
        match iso.process(iv) {
            Outcome::Discard => {}
            Outcome::Root(r) => found.push(r),
            Outcome::Leftover => leftovers.push(iv),
            Outcome::Split => {
                let (a, b) = iso.split(iv);
                stack.push(b);
                stack.push(a);
            }
        }
    }

    leftovers.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut merged: Vec<Interval> = Vec::new();
    for iv in leftovers {
        match merged.last_mut() {
            Some(last) if last.hi >= iv.lo => *last = last.hull(&iv),
            _ => merged.push(iv),
        }
    }
    found.extend(merged.into_iter().map(|iv| RootCert {
        enclosure: iv,
        kind: RootKind::UncertifiedTangential,
        residual_bound: iso.residual(iv),
    }));
    found.sort_by(|a, b| a.enclosure.lo.total_cmp(&b.enclosure.lo));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_epoly;

    #[test]
    fn line_example_has_two_roots() {
        let f = parse_epoly("2*x1 + 1 - exp(x1)").unwrap();
        for mode in [Mode::Fast, Mode::Rigorous] {
            let roots = isolate_roots_1d(&f, Interval::new(-5.0, 5.0), 1e-9, mode).unwrap();
            assert_eq!(roots.len(), 2, "{roots:?}");
            assert!(roots.iter().all(RootCert::is_certified));
            assert!(roots[0].enclosure.contains(0.0));
            let r = roots[1].enclosure;
            assert!(r.lo >= 1.25 && r.hi <= 1.26 && r.width() <= 1e-9);
        }
    }

    #[test]
    fn simple_cases() {
        let f = parse_epoly("exp(x1) - 1").unwrap();
        let roots = isolate_roots_1d(&f, Interval::new(-2.0, 2.0), 1e-9, Mode::Fast).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].enclosure.contains(0.0));
        let g = parse_epoly("exp(x1) + 1").unwrap();
        assert!(isolate_roots_1d(&g, Interval::new(-10.0, 10.0), 1e-9, Mode::Fast)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn double_root_is_reported_uncertified() {
        let f = parse_epoly("(x1 - 1)^2").unwrap();
        let roots = isolate_roots_1d(&f, Interval::new(-3.0, 3.0), 1e-9, Mode::Fast).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].kind, RootKind::UncertifiedTangential);
        assert!(roots[0].enclosure.contains(1.0));
    }

    #[test]
    fn errors() {
        assert!(isolate_roots_1d(&EPoly::zero(1), Interval::new(0.0, 1.0), 1e-9, Mode::Fast).is_err());
    }
}
