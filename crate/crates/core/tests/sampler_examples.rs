use expset_core::numeric::{isolate_roots_1d, sample_zero_cells_2d, Interval, IntervalBox, Mode};
use expset_core::parser::{parse_epoly, parse_poly};
use expset_core::epoly::expand_e;
use std::time::Instant;

const AXES: &str = "x1*u2 + x2*u1 - x1 - x2";
const CUBIC: &str = "(x1 + u1 - 1)*((2*x1 - u1 + 1)^2 + x2^2) + (2*x1 - u1 + 1)^3";

fn square(lo: f64, hi: f64) -> IntervalBox {
    IntervalBox::new(vec![Interval::new(lo, hi), Interval::new(lo, hi)])
}

fn x_star() -> Interval {
    let f = parse_epoly("2*x1 + 1 - exp(x1)").unwrap();
    let roots = isolate_roots_1d(&f, Interval::new(1.0, 2.0), 1e-12, Mode::Fast).unwrap();
    assert_eq!(roots.len(), 1);
    roots[0].enclosure
}

#[test]
fn two_axes_depth_8() {
    let f = expand_e(&parse_poly(AXES).unwrap());
    let depth = 8;
    let w = 4.0 / f64::from(1u32 << depth);
    let t = Instant::now();
    let cells = sample_zero_cells_2d(&f, &square(-2.0, 2.0), depth, Mode::Fast).unwrap();
    eprintln!("ex13 cells {} in {:?}", cells.len(), t.elapsed());
    assert!(!cells.is_empty());
    for c in &cells {
        let d = c.sides()[0].mig().min(c.sides()[1].mig());
        assert!(d <= 2.0 * w, "{c:?}");
    }
}

#[test]
fn line_and_point_depth_8() {
    let f = expand_e(&parse_poly(CUBIC).unwrap());
    let depth = 8;
    let w = 4.0 / f64::from(1u32 << depth);
    let xs = x_star();
    let t = Instant::now();
    let cells = sample_zero_cells_2d(&f, &square(-2.0, 2.0), depth, Mode::Fast).unwrap();
    eprintln!("ex15 cells {} in {:?}", cells.len(), t.elapsed());
    let mut near_point = 0;
    let mut bad = 0;
    for c in &cells {
        let [a, b] = [c.sides()[0], c.sides()[1]];
        let to_line = a.mig();
        let dx = (a.lo - xs.hi).max(xs.lo - a.hi).max(0.0);
        let dy = b.mig();
        let to_point = dx.hypot(dy);
        if to_point <= 2.0 * w {
            near_point += 1;
        }
        if to_line.min(to_point) > 2.0 * w {
            bad += 1;
            eprintln!("far cell {c:?}");
        }
    }
    assert_eq!(bad, 0);
    assert!(near_point > 0);
}
