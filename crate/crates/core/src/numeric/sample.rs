//! Quadtree zero-cell sampling for E-polynomials in two variables.

use super::eval::EPolyEnclosure;
use super::interval::IntervalBox;
use super::Mode;
use crate::epoly::EPoly;
use crate::error::{Error, Result};

/// Extra subdivision levels used to prove a leaf cell free of zeros.
pub const EXCLUSION_LEVELS: u32 = 3;

/// Cells of the depth-`max_depth` quadtree of `b` that may contain a zero of `f`.
///
/// A cell is kept when its enclosure and those of all its ancestors contain 0,
/// and it cannot be proven zero-free by subdividing it `EXCLUSION_LEVELS`
/// further levels. The result is a superset of `Z(f) ∩ b`, sorted by lower-left
/// corner, and the cells kept at depth `d + 1` lie inside cells kept at depth `d`.
pub fn sample_zero_cells_2d(f: &EPoly, b: &IntervalBox, max_depth: u32, mode: Mode) -> Result<Vec<IntervalBox>> {
    if f.is_identically_zero() {
        return Err(Error::IdenticallyZero);
    }
    if f.ambient() != 2 || b.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: f.ambient(),
            right: b.dim(),
        });
    }
    if max_depth > 16 {
        return Err(Error::InvalidArgument("depth must be at most 16".into()));
    }
    let enc = EPolyEnclosure::new(f, mode);
    let mut level = vec![b.clone()];
    for _ in 0..max_depth {
        level = level
            .iter()
            .flat_map(IntervalBox::bisect_all)
            .filter(|c| !enc.excludes_zero(c))
            .collect();
    }
    if max_depth == 0 {
        level.retain(|c| !enc.excludes_zero(c));
    }
    let mut out: Vec<IntervalBox> = level
        .into_iter()
        .filter(|c| survives(&enc, c, EXCLUSION_LEVELS))
        .collect();
    out.sort_by(|a, c| {
        let ka = (a.sides()[0].lo, a.sides()[1].lo);
        let kc = (c.sides()[0].lo, c.sides()[1].lo);
        ka.0.total_cmp(&kc.0).then(ka.1.total_cmp(&kc.1))
    });
    Ok(out)
}

/// Some chain of descendants `levels` deep has enclosures containing 0.
fn survives(enc: &EPolyEnclosure, cell: &IntervalBox, levels: u32) -> bool {
    if levels == 0 {
        return true;
    }
    cell.bisect_all()
        .iter()
        .any(|c| !enc.excludes_zero(c) && survives(enc, c, levels - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::interval::Interval;
    use crate::parser::parse_epoly;

    fn square(lo: f64, hi: f64) -> IntervalBox {
        IntervalBox::new(vec![Interval::new(lo, hi), Interval::new(lo, hi)])
    }

    #[test]
    fn never_zero_gives_no_cells() {
        let f = parse_epoly("exp(x1)*exp(x2)").unwrap();
        for d in 1..4 {
            assert!(sample_zero_cells_2d(&f, &square(0.0, 1.0), d, Mode::Fast)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn axes_cells_stay_near_axes() {
        let f = parse_epoly("x1*exp(x2) + x2*exp(x1) - x1 - x2").unwrap();
        let depth = 6;
        let w = 4.0 / f64::from(1u32 << depth);
        let cells = sample_zero_cells_2d(&f, &square(-2.0, 2.0), depth, Mode::Fast).unwrap();
        assert!(!cells.is_empty());
        for c in &cells {
            let d0 = c.sides()[0].mig();
            let d1 = c.sides()[1].mig();
            assert!(d0.min(d1) <= 2.0 * w, "{c:?}");
        }
    }

    #[test]
    fn deeper_cells_refine_shallower() {
        let f = parse_epoly("x1^2 + x2^2 - 1").unwrap();
        let a = sample_zero_cells_2d(&f, &square(-2.0, 2.0), 4, Mode::Fast).unwrap();
        let b = sample_zero_cells_2d(&f, &square(-2.0, 2.0), 5, Mode::Fast).unwrap();
        assert!(b.iter().all(|c| a.iter().any(|p| c.subset_of(p))));
    }
}
