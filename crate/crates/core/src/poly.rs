//! Sparse multivariate polynomials over `Q` in the variables `X_1..X_n, U_1..U_n`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A variable of the polynomial ring, 0-based. Text form is 1-based (`x1`, `u1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    U(usize),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X(i) | Var::U(i) => i,
        }
    }

    /// Position in a flat point vector `(x_1..x_n, u_1..u_n)`.
    pub fn slot(self, ambient: usize) -> usize {
        match self {
            Var::X(i) => i,
            Var::U(i) => ambient + i,
        }
    }

    pub fn from_slot(slot: usize, ambient: usize) -> Var {
        if slot < ambient {
            Var::X(slot)
        } else {
            Var::U(slot - ambient)
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::U(i) => write!(f, "u{}", i + 1),
        }
    }
}

/// Exponent vectors of a monomial `X^x_exp * U^u_exp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono {
    pub x_exp: Vec<u32>,
    pub u_exp: Vec<u32>,
}

impl Mono {
    pub fn one(ambient: usize) -> Self {
        Mono {
            x_exp: vec![0; ambient],
            u_exp: vec![0; ambient],
        }
    }

    pub fn var(ambient: usize, var: Var) -> Self {
        let mut m = Mono::one(ambient);
        *m.exp_mut(var) = 1;
        m
    }

    pub fn ambient(&self) -> usize {
        self.x_exp.len()
    }

    pub fn degree(&self) -> u32 {
        self.x_exp.iter().chain(&self.u_exp).sum()
    }

    pub fn exp(&self, var: Var) -> u32 {
        match var {
            Var::X(i) => self.x_exp[i],
            Var::U(i) => self.u_exp[i],
        }
    }

    pub fn exp_mut(&mut self, var: Var) -> &mut u32 {
        match var {
            Var::X(i) => &mut self.x_exp[i],
            Var::U(i) => &mut self.u_exp[i],
        }
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    pub fn has_u(&self) -> bool {
        self.u_exp.iter().any(|&e| e > 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            x_exp: self.x_exp.iter().zip(&other.x_exp).map(|(a, b)| a + b).collect(),
            u_exp: self.u_exp.iter().zip(&other.u_exp).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let sub = |a: &[u32], b: &[u32]| -> Option<Vec<u32>> {
            a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
        };
        Some(Mono {
            x_exp: sub(&self.x_exp, &other.x_exp)?,
            u_exp: sub(&self.u_exp, &other.u_exp)?,
        })
    }

    fn exps(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        let xs = self.x_exp.iter().enumerate().map(|(i, &e)| (Var::X(i), e));
        let us = self.u_exp.iter().enumerate().map(|(i, &e)| (Var::U(i), e));
        xs.chain(us).filter(|&(_, e)| e > 0)
    }
}

/// Graded lexicographic order on `(x_exp, u_exp)`.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.x_exp.cmp(&other.x_exp))
            .then_with(|| self.u_exp.cmp(&other.u_exp))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (var, e) in self.exps() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{var}^{e}")?;
            }
        }
        Ok(())
    }
}

/// An affine form `c_0 + sum_j c_j v_j` over all `2n` variables, used by
/// [`Poly::substitute_linear`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    /// One coefficient per slot `(x_1..x_n, u_1..u_n)`.
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
}

impl LinearForm {
    pub fn zero(ambient: usize) -> Self {
        LinearForm {
            coeffs: vec![Rat::zero(); 2 * ambient],
            constant: Rat::zero(),
        }
    }

    pub fn constant(ambient: usize, c: Rat) -> Self {
        LinearForm {
            constant: c,
            ..LinearForm::zero(ambient)
        }
    }

    pub fn var(ambient: usize, var: Var) -> Self {
        let mut form = LinearForm::zero(ambient);
        form.coeffs[var.slot(ambient)] = Rat::one();
        form
    }

    pub fn to_poly(&self) -> Poly {
        let ambient = self.coeffs.len() / 2;
        let mut p = Poly::constant(ambient, self.constant.clone());
        for (slot, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p = &p + &Poly::var(ambient, Var::from_slot(slot, ambient)).scale(c);
            }
        }
        p
    }
}

/// Sparse polynomial in `X_1..X_n, U_1..U_n` with rational coefficients.
///
/// No stored coefficient is zero; the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ambient: usize,
    terms: BTreeMap<Mono, Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Ring operation with an ambient check.
pub fn poly_arith(a: &Poly, b: &Poly, op: ArithOp) -> Result<Poly> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch {
            left: a.ambient,
            right: b.ambient,
        });
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

impl Poly {
    pub fn zero(ambient: usize) -> Self {
        Poly {
            ambient,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ambient: usize) -> Self {
        Poly::constant(ambient, Rat::one())
    }

    pub fn constant(ambient: usize, c: Rat) -> Self {
        Poly::monomial(ambient, Mono::one(ambient), c)
    }

    pub fn var(ambient: usize, var: Var) -> Self {
        Poly::monomial(ambient, Mono::var(ambient, var), Rat::one())
    }

    pub fn monomial(ambient: usize, mono: Mono, c: Rat) -> Self {
        debug_assert_eq!(mono.ambient(), ambient);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Poly { ambient, terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms(ambient: usize, terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut p = Poly::zero(ambient);
        for (m, c) in terms {
            assert_eq!(m.ambient(), ambient, "monomial ambient mismatch");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Mono::is_one)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Mono::one(self.ambient))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Variables that occur with a positive exponent, in slot order.
    pub fn variables(&self) -> Vec<Var> {
        (0..2 * self.ambient)
            .map(|s| Var::from_slot(s, self.ambient))
            .filter(|&v| self.degree_in(v) > 0)
            .collect()
    }

    pub fn depends_on_u(&self) -> bool {
        self.terms.keys().any(Mono::has_u)
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.ambient);
        }
        Poly {
            ambient: self.ambient,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.ambient);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact value at a point `(x_1..x_n, u_1..u_n)`.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != 2 * self.ambient {
            return Err(Error::PointLength {
                expected: 2 * self.ambient,
                got: point.len(),
            });
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (var, e) in m.exps() {
                t *= num_traits::pow(point[var.slot(self.ambient)].clone(), e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point value at a point `(x_1..x_n, u_1..u_n)`.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), 2 * self.ambient, "point length");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.exps().fold(c.to_f64().unwrap_or(f64::NAN), |t, (var, e)| {
                    t * point[var.slot(self.ambient)].powi(e as i32)
                })
            })
            .sum()
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: Var) -> Poly {
        let mut out = Poly::zero(self.ambient);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            *dm.exp_mut(var) -= 1;
            out.add_term(dm, c * Rat::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Replaces `var` by an affine form and expands.
    pub fn substitute_linear(&self, var: Var, form: &LinearForm) -> Result<Poly> {
        if var.index() >= self.ambient {
            return Err(Error::VariableOutOfRange(var.to_string()));
        }
        if form.coeffs.len() != 2 * self.ambient {
            return Err(Error::PointLength {
                expected: 2 * self.ambient,
                got: form.coeffs.len(),
            });
        }
        let replacement = form.to_poly();
        let mut powers: Vec<Poly> = vec![Poly::one(self.ambient)];
        let mut out = Poly::zero(self.ambient);
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * &replacement;
                powers.push(next);
            }
            let mut rest = m.clone();
            *rest.exp_mut(var) = 0;
            for (pm, pc) in &powers[e].terms {
                out.add_term(rest.mul(pm), c * pc);
            }
        }
        Ok(out)
    }

    /// Substitutes a rational constant for `var`.
    pub fn substitute_value(&self, var: Var, value: &Rat) -> Poly {
        self.substitute_linear(var, &LinearForm::constant(self.ambient, value.clone()))
            .expect("variable in range")
    }

    /// Drops the slots `X_index` and `U_index`, which must not occur.
    pub fn drop_variable(&self, index: usize) -> Poly {
        assert!(index < self.ambient);
        let ambient = self.ambient - 1;
        let terms = self.terms.iter().map(|(m, c)| {
            assert!(
                m.x_exp[index] == 0 && m.u_exp[index] == 0,
                "dropped variable occurs in polynomial"
            );
            let mut x = m.x_exp.clone();
            let mut u = m.u_exp.clone();
            x.remove(index);
            u.remove(index);
            (Mono { x_exp: x, u_exp: u }, c.clone())
        });
        Poly::from_terms(ambient, terms)
    }

    /// Common monomial factor of all terms (the gcd of the exponent vectors).
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Mono::one(self.ambient);
        };
        it.fold(first.clone(), |acc, m| Mono {
            x_exp: acc.x_exp.iter().zip(&m.x_exp).map(|(a, b)| *a.min(b)).collect(),
            u_exp: acc.u_exp.iter().zip(&m.u_exp).map(|(a, b)| *a.min(b)).collect(),
        })
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert_eq!(self.ambient, divisor.ambient);
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.ambient);
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            let t = Poly::monomial(self.ambient, qm, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Largest absolute numerator or denominator among the coefficients.
    pub fn coefficient_height(&self) -> BigInt {
        self.terms
            .values()
            .flat_map(|c| [c.numer().abs(), c.denom().clone()])
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Groups terms by `U`-exponent vector: `P = sum_d A_d(X) U^d`.
    pub fn u_groups(&self) -> BTreeMap<Vec<u32>, Poly> {
        let mut groups: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let xm = Mono {
                x_exp: m.x_exp.clone(),
                u_exp: vec![0; self.ambient],
            };
            groups
                .entry(m.u_exp.clone())
                .or_insert_with(|| Poly::zero(self.ambient))
                .add_term(xm, c.clone());
        }
        groups
    }
}

fn combine(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
    assert_eq!(a.ambient, b.ambient, "ambient mismatch");
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.add_term(m.clone(), if negate_b { -c } else { c.clone() });
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        combine(self, rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        combine(self, rhs, true)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.ambient, rhs.ambient, "ambient mismatch");
        let mut out = Poly::zero(self.ambient);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub(crate) fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text: terms in descending graded-lex order, e.g. `4*x1^2 - 4*x1*u1 + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", fmt_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rat(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, Var::X(i))
    }
    fn u(n: usize, i: usize) -> Poly {
        Poly::var(n, Var::U(i))
    }
    fn c(n: usize, v: i64) -> Poly {
        Poly::constant(n, rat(v))
    }

    #[test]
    fn difference_of_squares() {
        let a = &x(1, 0) + &u(1, 0);
        let b = &x(1, 0) - &u(1, 0);
        let expect = &x(1, 0).pow(2) - &u(1, 0).pow(2);
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = &(&x(2, 0) * &u(2, 1)) + &c(2, 3);
        let z = &p + &(-&p);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn square_of_example_line() {
        // (2X - U + 1)^2, expanded by hand
        let p = &(&x(1, 0).scale(&rat(2)) - &u(1, 0)) + &c(1, 1);
        let sq = &p * &p;
        assert_eq!(sq.to_string(), "4*x1^2 - 4*x1*u1 + u1^2 + 4*x1 - 2*u1 + 1");
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let err = poly_arith(&x(1, 0), &x(2, 0), ArithOp::Add).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 1, right: 2 });
    }

    #[test]
    fn eval_examples() {
        let p = &(&x(1, 0).scale(&rat(2)) - &u(1, 0)) + &c(1, 1);
        assert_eq!(p.eval(&[rat(0), rat(1)]).unwrap(), rat(0));
        assert_eq!(Poly::zero(2).eval(&[rat(3), rat(4), rat(5), rat(6)]).unwrap(), rat(0));

        let q = &(&(&x(2, 0) * &u(2, 1)) + &(&x(2, 1) * &u(2, 0))) - &(&x(2, 0) + &x(2, 1));
        assert_eq!(q.eval(&[rat(1), rat(1), rat(2), rat(3)]).unwrap(), rat(3));
        assert!(matches!(q.eval(&[rat(1)]), Err(Error::PointLength { .. })));
    }

    #[test]
    fn derivatives() {
        let p = &(&x(1, 0).scale(&rat(2)) - &u(1, 0)) + &c(1, 1);
        assert_eq!(p.derivative(Var::U(0)), c(1, -1));
        let q = &x(2, 0).pow(2) * &u(2, 1);
        assert_eq!(q.derivative(Var::X(0)), (&x(2, 0) * &u(2, 1)).scale(&rat(2)));
    }

    #[test]
    fn substitute_x1_by_x2() {
        let n = 2;
        let q = &(&(&x(n, 0) * &u(n, 1)) + &(&x(n, 1) * &u(n, 0))) - &(&x(n, 0) + &x(n, 1));
        let s = q.substitute_linear(Var::X(0), &LinearForm::var(n, Var::X(1))).unwrap();
        let expect = &(&(&x(n, 1) * &u(n, 1)) + &(&x(n, 1) * &u(n, 0))) - &x(n, 1).scale(&rat(2));
        assert_eq!(s, expect);
        let id = q.substitute_linear(Var::X(0), &LinearForm::var(n, Var::X(0))).unwrap();
        assert_eq!(id, q);
    }

    #[test]
    fn div_exact_recovers_factor() {
        let a = &x(1, 0) - &u(1, 0);
        let b = &(&x(1, 0) + &u(1, 0)) + &c(1, 2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&(&x(1, 0) + &c(1, 5))), None);
    }

    #[test]
    fn grlex_order_and_printing() {
        let p = &(&x(2, 1) - &u(2, 0).scale(&ratio(3, 2))) + &x(2, 0).pow(2);
        assert_eq!(p.to_string(), "x1^2 + x2 - 3/2*u1");
        assert_eq!((-&p).to_string(), "-x1^2 - x2 + 3/2*u1");
    }
}
