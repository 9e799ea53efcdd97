//! Analysis of real exponential-algebraic sets.
//!
//! An E-polynomial is a function `f(x) = P(x_1, .., x_n, e^{x_1}, .., e^{x_n})` for a
//! polynomial `P` over the rationals. This crate provides:
//!
//! * exact sparse polynomial arithmetic over `Q` in the `2n` variables `X`, `U` ([`poly`]),
//! * univariate factorization over `Q` ([`factor`]),
//! * a canonical form for E-polynomials with a decidable vanishing test ([`epoly`]),
//! * the hyperplane candidates determined by the `U`-monomials of `P` ([`hyperplanes`]),
//! * the component classification drivers ([`classify`]),
//! * interval numerics: enclosures, root isolation, zero-cell sampling and
//!   transversality checks ([`numeric`]),
//! * a small text grammar with a canonical printer ([`parser`]).

pub mod classify;
pub mod epoly;
pub mod error;
pub mod factor;
pub mod hyperplanes;
pub mod numeric;
pub mod parser;
pub mod poly;
pub mod upoly;

pub use epoly::{EPoly, Spectrum};
pub use error::{Error, Result};
pub use hyperplanes::{CandidateSet, Hyperplane};
pub use poly::{LinearForm, Mono, Poly, Rat, Var};
pub use upoly::UniPoly;
