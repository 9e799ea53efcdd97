//! Interval numerics for E-polynomials.

pub mod eval;
pub mod interval;
pub mod rigorous;
pub mod roots;
pub mod sample;
pub mod transversal;

use serde::{Deserialize, Serialize};

pub use eval::{interval_eval, EPolyEnclosure};
pub use interval::{Interval, IntervalBox};
pub use roots::{default_domain, isolate_roots_1d, RootCert, RootKind};
pub use sample::sample_zero_cells_2d;
pub use transversal::{check_transversality, TransversalityReport, TransversalityVerdict};

/// Interval backend: hardware floats with ulp inflation, or dyadic rationals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[default]
    Fast,
    Rigorous,
}
