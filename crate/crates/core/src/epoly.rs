//! Exponential polynomials `f = sum_lambda A_lambda(X) e^{lambda . X}`.
//!
//! The canonical form is a map from distinct spectra to nonzero coefficient
//! polynomials in `X`. For distinct rational spectra the functions `e^{lambda . X}`
//! are linearly independent over `Q[X]`: after clearing denominators they become
//! monomials in `e^{X_i / N}`, and the numbers `x_i / N, e^{x_i / N}` are
//! algebraically independent for generic `x` by Lindemann-Weierstrass. So the
//! map `E` is an injective ring homomorphism and `f` vanishes as a function on
//! `R^n` exactly when its canonical form is empty.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperplanes::Hyperplane;
use crate::poly::{fmt_rat, rat, LinearForm, Mono, Poly, Rat, Var};

/// Exponent vector `lambda` of `e^{lambda . X}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spectrum(pub Vec<Rat>);

impl Spectrum {
    pub fn zero(n: usize) -> Self {
        Spectrum(vec![Rat::zero(); n])
    }

    pub fn from_exponents(d: &[u32]) -> Self {
        Spectrum(d.iter().map(|&e| rat(e as i64)).collect())
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Spectrum) -> Spectrum {
        Spectrum(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn dot_f64(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(l, v)| l.to_f64().unwrap_or(f64::NAN) * v)
            .sum()
    }

    /// Exponent vector when every entry is a non-negative integer.
    pub fn as_exponents(&self) -> Option<Vec<u32>> {
        self.0
            .iter()
            .map(|l| {
                if l.is_integer() && !l.is_negative() {
                    l.to_integer().to_u32()
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Lexicographic on the `(numerator, denominator)` pairs of the entries.
impl Ord for Spectrum {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            let c = a
                .numer()
                .cmp(b.numer())
                .then_with(|| a.denom().cmp(b.denom()));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Spectrum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Spectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(fmt_rat))
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rat).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Canonical exponential polynomial. Coefficients have ambient `n` and no `U`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EPoly {
    ambient: usize,
    terms: BTreeMap<Spectrum, Poly>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EOp {
    Add,
    Mul,
}

/// `E(P) = P(X, e^X)`.
pub fn expand_e(p: &Poly) -> EPoly {
    let terms = p
        .u_groups()
        .into_iter()
        .map(|(d, a)| (Spectrum::from_exponents(&d), a))
        .collect();
    EPoly {
        ambient: p.ambient(),
        terms,
    }
}

/// Ring operation with an ambient check.
pub fn epoly_arith(a: &EPoly, b: &EPoly, op: EOp) -> Result<EPoly> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch {
            left: a.ambient,
            right: b.ambient,
        });
    }
    Ok(match op {
        EOp::Add => a + b,
        EOp::Mul => a * b,
    })
}

impl EPoly {
    pub fn zero(ambient: usize) -> Self {
        EPoly {
            ambient,
            terms: BTreeMap::new(),
        }
    }

    /// Single term `coeff * e^{lambda . X}`; `coeff` must not involve `U`.
    pub fn term(lambda: Spectrum, coeff: Poly) -> Self {
        assert_eq!(lambda.0.len(), coeff.ambient());
        assert!(!coeff.depends_on_u(), "coefficient involves U");
        let mut e = EPoly::zero(coeff.ambient());
        e.add_term(lambda, coeff);
        e
    }

    fn add_term(&mut self, lambda: Spectrum, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Terms in ascending spectrum order.
    pub fn terms(&self) -> impl Iterator<Item = (&Spectrum, &Poly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lambda: &Spectrum) -> Option<&Poly> {
        self.terms.get(lambda)
    }

    /// Semantic vanishing test; see the module documentation.
    pub fn is_identically_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Only the zero spectrum occurs.
    pub fn is_algebraic(&self) -> bool {
        self.terms.keys().all(Spectrum::is_zero)
    }

    /// Inverse of [`expand_e`] for non-negative integer spectra.
    pub fn to_poly(&self) -> Option<Poly> {
        let n = self.ambient;
        let mut out = Poly::zero(n);
        for (lambda, a) in &self.terms {
            let d = lambda.as_exponents()?;
            let u = Poly::monomial(
                n,
                Mono {
                    x_exp: vec![0; n],
                    u_exp: d,
                },
                Rat::one(),
            );
            out = &out + &(a * &u);
        }
        Some(out)
    }

    pub fn scale(&self, c: &Rat) -> EPoly {
        let mut out = EPoly::zero(self.ambient);
        for (l, a) in &self.terms {
            out.add_term(l.clone(), a.scale(c));
        }
        out
    }

    /// `d/dX_i [A e^{lambda . X}] = (dA/dX_i + lambda_i A) e^{lambda . X}`.
    pub fn derivative(&self, i: usize) -> Result<EPoly> {
        if i >= self.ambient {
            return Err(Error::VariableOutOfRange(format!("x{}", i + 1)));
        }
        let mut out = EPoly::zero(self.ambient);
        for (l, a) in &self.terms {
            let d = &a.derivative(Var::X(i)) + &a.scale(&l.0[i]);
            out.add_term(l.clone(), d);
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<EPoly> {
        (0..self.ambient)
            .map(|i| self.derivative(i).expect("index in range"))
            .collect()
    }

    /// Restriction to `m . X = 0`, eliminating the pivot variable of `m`.
    /// The result lives in the remaining `n - 1` variables, in order.
    pub fn restrict_to_hyperplane(&self, m: &Hyperplane) -> Result<EPoly> {
        let n = self.ambient;
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: m.dim(),
            });
        }
        if m.normal().iter().all(|&c| c == 0) {
            return Err(Error::InvalidHyperplane("zero normal vector".into()));
        }
        let a = m.pivot();
        let ma = rat(m.normal()[a]);
        let ratios: Vec<Rat> = m.normal().iter().map(|&c| rat(c) / &ma).collect();
        let mut form = LinearForm::zero(n);
        for j in (0..n).filter(|&j| j != a) {
            form.coeffs[j] = -ratios[j].clone();
        }
        let mut out = EPoly::zero(n - 1);
        for (l, coeff) in &self.terms {
            let c = coeff.substitute_linear(Var::X(a), &form)?.drop_variable(a);
            let lambda = Spectrum(
                (0..n)
                    .filter(|&j| j != a)
                    .map(|j| &l.0[j] - &l.0[a] * &ratios[j])
                    .collect(),
            );
            out.add_term(lambda, c);
        }
        Ok(out)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.ambient, "point length");
        let mut pt = x.to_vec();
        pt.extend(std::iter::repeat_n(0.0, self.ambient));
        self.terms
            .iter()
            .map(|(l, a)| a.eval_f64(&pt) * l.dot_f64(x).exp())
            .sum()
    }

    /// Largest `|coefficient|` over all terms, as `f64`.
    pub fn coefficient_height(&self) -> f64 {
        self.terms
            .values()
            .map(|a| a.coefficient_height().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

fn merge(a: &EPoly, b: &EPoly, negate_b: bool) -> EPoly {
    assert_eq!(a.ambient, b.ambient, "ambient mismatch");
    let mut out = a.clone();
    for (l, c) in &b.terms {
        out.add_term(l.clone(), if negate_b { -c } else { c.clone() });
    }
    out
}

impl Add for &EPoly {
    type Output = EPoly;
    fn add(self, rhs: &EPoly) -> EPoly {
        merge(self, rhs, false)
    }
}

impl Sub for &EPoly {
    type Output = EPoly;
    fn sub(self, rhs: &EPoly) -> EPoly {
        merge(self, rhs, true)
    }
}

impl Mul for &EPoly {
    type Output = EPoly;
    fn mul(self, rhs: &EPoly) -> EPoly {
        assert_eq!(self.ambient, rhs.ambient, "ambient mismatch");
        let mut out = EPoly::zero(self.ambient);
        for (la, ca) in &self.terms {
            for (lb, cb) in &rhs.terms {
                out.add_term(la.add(lb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &EPoly {
    type Output = EPoly;
    fn neg(self) -> EPoly {
        self.scale(&-Rat::one())
    }
}

fn fmt_exp(lambda: &Spectrum) -> String {
    if let Some(d) = lambda.as_exponents() {
        let parts: Vec<String> = d
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| match e {
                1 => format!("exp(x{})", i + 1),
                _ => format!("exp(x{})^{e}", i + 1),
            })
            .collect();
        return parts.join("*");
    }
    let n = lambda.0.len();
    let mut form = LinearForm::zero(n);
    form.coeffs[..n].clone_from_slice(&lambda.0);
    format!("exp({})", form.to_poly())
}

/// `(A_0) + (A_1)*exp(x1) + ...` in ascending spectrum order; a unit
/// coefficient prints as the bare exponential.
impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if l.is_zero() {
                write!(f, "({a})")?;
            } else if a.is_constant() && a.constant_term().is_one() {
                write!(f, "{}", fmt_exp(l))?;
            } else {
                write!(f, "({a})*{}", fmt_exp(l))?;
            }
        }
        Ok(())
    }
}
