#![allow(dead_code)]

use expset_core::poly::ratio;
use expset_core::{EPoly, Mono, Poly, Rat, Spectrum};
use proptest::prelude::*;

pub fn coeff() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

pub fn nonzero_coeff() -> impl Strategy<Value = Rat> {
    (1i64..=9, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| ratio(if neg { -n } else { n }, d))
}

pub fn mono(n: usize, max_x: u32, max_u: u32) -> impl Strategy<Value = Mono> {
    (
        proptest::collection::vec(0..=max_x, n),
        proptest::collection::vec(0..=max_u, n),
    )
        .prop_map(|(x_exp, u_exp)| Mono { x_exp, u_exp })
}

/// Sparse polynomial in `2n` variables with small exponents.
pub fn poly(n: usize, max_terms: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((mono(n, 2, 2), coeff()), 0..=max_terms)
        .prop_map(move |terms| Poly::from_terms(n, terms))
}

pub fn poly_x_only(n: usize, max_terms: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((mono(n, 2, 0), coeff()), 0..=max_terms)
        .prop_map(move |terms| Poly::from_terms(n, terms))
}

pub fn spectrum(n: usize) -> impl Strategy<Value = Spectrum> {
    proptest::collection::vec((-3i64..=3, 1i64..=2).prop_map(|(a, b)| ratio(a, b)), n).prop_map(Spectrum)
}

/// Sum of terms `A(x) e^{lambda . x}` with rational spectra.
pub fn epoly(n: usize) -> impl Strategy<Value = EPoly> {
    proptest::collection::vec((spectrum(n), poly_x_only(n, 3)), 1..=3).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(EPoly::zero(n), |acc, (l, a)| &acc + &EPoly::term(l, a))
    })
}

pub fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.5f64..1.5, n)
}

pub fn rat_point(len: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(coeff(), len)
}
