//! Candidate hyperplanes determined by the `U`-monomial spectrum of `P`.
//!
//! For `P = sum_nu A_nu(X) U^{d_nu}` the candidates are the hyperplanes
//! `(d_nu - d_mu) . X = 0` over all pairs of distinct exponent vectors. With at most
//! one distinct `U`-exponent vector the family is undefined; that case is kept
//! total as a degenerate, empty [`CandidateSet`].

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Rational hyperplane through the origin `m . X = 0`, with `m` primitive and its
/// first nonzero entry positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hyperplane {
    normal: Vec<i64>,
}

impl Hyperplane {
    /// Divides by the gcd and fixes the sign.
    pub fn primitive_normalize(v: &[i64]) -> Result<Hyperplane> {
        let g = v.iter().fold(0i64, |acc, &c| acc.gcd(&c));
        if g == 0 {
            return Err(Error::InvalidHyperplane("zero normal vector".into()));
        }
        let first = v.iter().copied().find(|&c| c != 0).unwrap();
        let g = if first < 0 { -g } else { g };
        Ok(Hyperplane {
            normal: v.iter().map(|c| c / g).collect(),
        })
    }

    /// Coordinate hyperplane `x_i = 0` in dimension `n`.
    pub fn coordinate(n: usize, i: usize) -> Hyperplane {
        let mut normal = vec![0; n];
        normal[i] = 1;
        Hyperplane { normal }
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Index of the entry of largest magnitude, smallest index on ties.
    pub fn pivot(&self) -> usize {
        let mut best = 0;
        for (i, m) in self.normal.iter().enumerate() {
            if m.abs() > self.normal[best].abs() {
                best = i;
            }
        }
        best
    }

    /// Point of the hyperplane parametrized by the non-pivot coordinates.
    pub fn embed(&self, free: &[f64]) -> Vec<f64> {
        let a = self.pivot();
        assert_eq!(free.len() + 1, self.dim());
        let mut x = free.to_vec();
        let s: f64 = (0..self.dim())
            .filter(|&j| j != a)
            .zip(free)
            .map(|(j, v)| self.normal[j] as f64 * v)
            .sum();
        x.insert(a, -s / self.normal[a] as f64);
        x
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &m) in self.normal.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let sign = if m < 0 { "-" } else { "+" };
            if first {
                if m < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if m.abs() == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "{}*x{}", m.abs(), i + 1)?;
            }
        }
        write!(f, " = 0")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    /// Sorted lexicographically by normal vector, no duplicates.
    pub hyperplanes: Vec<Hyperplane>,
    /// At most one distinct `U`-exponent vector.
    pub degenerate: bool,
}

/// Distinct `U`-exponent vectors of `p`.
pub fn u_exponent_vectors(p: &Poly) -> Vec<Vec<u32>> {
    p.terms()
        .map(|(m, _)| m.u_exp.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub fn candidate_hyperplanes(p: &Poly) -> CandidateSet {
    let vectors = u_exponent_vectors(p);
    if vectors.len() <= 1 {
        return CandidateSet {
            hyperplanes: Vec::new(),
            degenerate: true,
        };
    }
    let mut set = BTreeSet::new();
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| *x as i64 - *y as i64).collect();
            set.insert(Hyperplane::primitive_normalize(&diff).expect("distinct vectors"));
        }
    }
    CandidateSet {
        hyperplanes: set.into_iter().collect(),
        degenerate: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn hp(v: &[i64]) -> Hyperplane {
        Hyperplane::primitive_normalize(v).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(hp(&[2, -2]).normal(), &[1, -1]);
        assert_eq!(hp(&[0, -3]).normal(), &[0, 1]);
        assert_eq!(hp(&[-4, 6]).normal(), &[2, -3]);
        assert!(matches!(
            Hyperplane::primitive_normalize(&[0, 0]),
            Err(Error::InvalidHyperplane(_))
        ));
    }

    #[test]
    fn display() {
        assert_eq!(hp(&[1, -1]).to_string(), "x1 - x2 = 0");
        assert_eq!(hp(&[2, -3]).to_string(), "2*x1 - 3*x2 = 0");
        assert_eq!(hp(&[0, 1]).to_string(), "x2 = 0");
    }

    #[test]
    fn pivot_prefers_largest_then_first() {
        assert_eq!(hp(&[1, -1]).pivot(), 0);
        assert_eq!(hp(&[1, -3, 3]).pivot(), 1);
    }

    #[test]
    fn two_axes_and_diagonal() {
        let p = parse_poly("x1*u2 + x2*u1 - x1 - x2").unwrap();
        let c = candidate_hyperplanes(&p);
        assert!(!c.degenerate);
        assert_eq!(c.hyperplanes, vec![hp(&[0, 1]), hp(&[1, -1]), hp(&[1, 0])]);
    }

    #[test]
    fn single_exponential_cubic() {
        let p = parse_poly("(x1 + u1 - 1)*((2*x1 - u1 + 1)^2 + x2^2) + (2*x1 - u1 + 1)^3").unwrap();
        let c = candidate_hyperplanes(&p);
        assert_eq!(c.hyperplanes, vec![hp(&[1, 0])]);
    }

    #[test]
    fn single_u_monomial_is_degenerate() {
        let p = parse_poly("u1*u2").unwrap();
        let c = candidate_hyperplanes(&p);
        assert!(c.degenerate);
        assert!(c.hyperplanes.is_empty());
    }
}
