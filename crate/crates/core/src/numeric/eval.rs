//! Interval enclosures of polynomials and E-polynomials.

use num_traits::ToPrimitive;

use super::interval::{Interval, IntervalBox};
use super::rigorous::{RatInterval, DEFAULT_PRECISION};
use super::Mode;
use crate::epoly::EPoly;
use crate::poly::{Poly, Rat};

/// Interval scalar used by the generic evaluators.
pub trait Scalar: Clone {
    fn from_rat(r: &Rat) -> Self;
    fn from_interval(iv: &Interval) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn powi(&self, k: u32) -> Self;
    fn exp(&self) -> Self;
    fn to_interval(&self) -> Interval;
    fn zero() -> Self;
}

/// Enclosure of a rational by `f64` endpoints.
pub fn rat_enclosure(r: &Rat) -> Interval {
    RatInterval::point(r.clone()).to_interval()
}

impl Scalar for Interval {
    fn from_rat(r: &Rat) -> Self {
        let f = r.to_f64().unwrap_or(f64::NAN);
        match Rat::from_float(f) {
            Some(q) if &q == r => Interval::point(f),
            _ => rat_enclosure(r),
        }
    }
    fn from_interval(iv: &Interval) -> Self {
        *iv
    }
    fn add(&self, o: &Self) -> Self {
        Interval::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Interval::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Interval::mul(self, o)
    }
    fn powi(&self, k: u32) -> Self {
        Interval::powi(self, k)
    }
    fn exp(&self) -> Self {
        Interval::exp(self)
    }
    fn to_interval(&self) -> Interval {
        *self
    }
    fn zero() -> Self {
        Interval::point(0.0)
    }
}

impl Scalar for RatInterval {
    fn from_rat(r: &Rat) -> Self {
        RatInterval::point(r.clone())
    }
    fn from_interval(iv: &Interval) -> Self {
        RatInterval::from_interval(iv)
    }
    fn add(&self, o: &Self) -> Self {
        RatInterval::add(self, o, DEFAULT_PRECISION)
    }
    fn sub(&self, o: &Self) -> Self {
        RatInterval::sub(self, o, DEFAULT_PRECISION)
    }
    fn mul(&self, o: &Self) -> Self {
        RatInterval::mul(self, o, DEFAULT_PRECISION)
    }
    fn powi(&self, k: u32) -> Self {
        RatInterval::powi(self, k, DEFAULT_PRECISION)
    }
    fn exp(&self) -> Self {
        RatInterval::exp(self, DEFAULT_PRECISION)
    }
    fn to_interval(&self) -> Interval {
        RatInterval::to_interval(self)
    }
    fn zero() -> Self {
        RatInterval::point(Rat::from_integer(0.into()))
    }
}

/// Natural interval extension of `p` at a point of `2n` scalars `(x, u)`.
pub fn eval_poly<S: Scalar>(p: &Poly, point: &[S]) -> S {
    assert_eq!(point.len(), 2 * p.ambient(), "point length");
    let n = p.ambient();
    let mut acc = S::zero();
    for (m, c) in p.terms() {
        let mut t = S::from_rat(c);
        for (i, &e) in m.x_exp.iter().enumerate() {
            if e > 0 {
                t = t.mul(&point[i].powi(e));
            }
        }
        for (i, &e) in m.u_exp.iter().enumerate() {
            if e > 0 {
                t = t.mul(&point[n + i].powi(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// Natural interval extension of `f` over `x`.
pub fn eval_epoly<S: Scalar>(f: &EPoly, x: &[S]) -> S {
    let n = f.ambient();
    assert_eq!(x.len(), n, "box dimension");
    let mut point: Vec<S> = x.to_vec();
    point.extend((0..n).map(|_| S::zero()));
    let mut acc = S::zero();
    for (lambda, a) in f.terms() {
        let coeff = eval_poly(a, &point);
        if lambda.is_zero() {
            acc = acc.add(&coeff);
            continue;
        }
        let mut arg = S::zero();
        for (l, xi) in lambda.entries().iter().zip(x) {
            if !num_traits::Zero::is_zero(l) {
                arg = arg.add(&S::from_rat(l).mul(xi));
            }
        }
        acc = acc.add(&coeff.mul(&arg.exp()));
    }
    acc
}

/// `interval_eval` in the requested mode: natural form only.
pub fn interval_eval(f: &EPoly, b: &IntervalBox, mode: Mode) -> Interval {
    match mode {
        Mode::Fast => eval_epoly::<Interval>(f, b.sides()),
        Mode::Rigorous => {
            let x: Vec<RatInterval> = b.sides().iter().map(RatInterval::from_interval).collect();
            eval_epoly(f, &x).to_interval()
        }
    }
}

/// Tightened enclosures of an E-polynomial: natural form intersected with the
/// mean-value form and the second-order Taylor form about the box midpoint.
#[derive(Debug, Clone)]
pub struct EPolyEnclosure {
    f: EPoly,
    grad: Vec<EPoly>,
    hess: Vec<Vec<EPoly>>,
    mode: Mode,
}

impl EPolyEnclosure {
    pub fn new(f: &EPoly, mode: Mode) -> Self {
        let grad = f.gradient();
        let hess = grad.iter().map(EPoly::gradient).collect();
        EPolyEnclosure {
            f: f.clone(),
            grad,
            hess,
            mode,
        }
    }

    pub fn function(&self) -> &EPoly {
        &self.f
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn enclose(&self, b: &IntervalBox) -> Interval {
        match self.mode {
            Mode::Fast => self.enclose_in::<Interval>(b),
            Mode::Rigorous => self.enclose_in::<RatInterval>(b),
        }
    }

    /// Enclosure of the partial derivative along `x_i`.
    pub fn enclose_derivative(&self, i: usize, b: &IntervalBox) -> Interval {
        interval_eval(&self.grad[i], b, self.mode)
    }

    /// `f` has no zero on `b`, proven in the enclosure's mode.
    ///
    /// In rigorous mode each form is screened in floating point first and only
    /// the form that excludes zero is recomputed exactly. An intersection of
    /// intervals that each contain 0 contains 0, so some single form must
    /// exclude it whenever the tightened enclosure does.
    pub fn excludes_zero(&self, b: &IntervalBox) -> bool {
        match self.mode {
            Mode::Fast => self.enclose_in::<Interval>(b).excludes_zero(),
            Mode::Rigorous => {
                let forms = self.form_count(b);
                (0..forms).any(|k| {
                    self.form::<Interval>(b, k).excludes_zero() && self.form::<RatInterval>(b, k).excludes_zero()
                }) || self.enclose_in::<RatInterval>(b).excludes_zero()
            }
        }
    }

    fn form_count(&self, b: &IntervalBox) -> usize {
        if b.sides().iter().all(|s| s.width() == 0.0) {
            1
        } else {
            3
        }
    }

    fn enclose_in<S: Scalar>(&self, b: &IntervalBox) -> Interval {
        let mut out = self.form::<S>(b, 0);
        for k in 1..self.form_count(b) {
            if let Some(i) = out.intersect(&self.form::<S>(b, k)) {
                out = i;
            }
        }
        out
    }

    /// Natural form (0), mean-value form (1) or second-order Taylor form (2).
    fn form<S: Scalar>(&self, b: &IntervalBox, k: usize) -> Interval {
        let x: Vec<S> = b.sides().iter().map(S::from_interval).collect();
        if k == 0 {
            return eval_epoly(&self.f, &x).to_interval();
        }
        let mid: Vec<f64> = b.mid();
        let c: Vec<S> = mid.iter().map(|&m| S::from_interval(&Interval::point(m))).collect();
        let d: Vec<S> = b
            .sides()
            .iter()
            .zip(&mid)
            .map(|(s, &m)| S::from_interval(s).sub(&S::from_interval(&Interval::point(m))))
            .collect();
        let mut acc = eval_epoly(&self.f, &c);
        if k == 1 {
            for (g, di) in self.grad.iter().zip(&d) {
                acc = acc.add(&eval_epoly(g, &x).mul(di));
            }
            return acc.to_interval();
        }
        for (g, di) in self.grad.iter().zip(&d) {
            acc = acc.add(&eval_epoly(g, &c).mul(di));
        }
        let half = S::from_rat(&Rat::new(1.into(), 2.into()));
        let n = d.len();
        for i in 0..n {
            for j in 0..n {
                let h = eval_epoly(&self.hess[i][j], &x);
                acc = acc.add(&half.mul(&h).mul(&d[i]).mul(&d[j]));
            }
        }
        acc.to_interval()
    }
}
