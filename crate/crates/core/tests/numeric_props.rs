mod common;

use common::*;
use expset_core::numeric::{
    check_transversality, interval_eval, isolate_roots_1d, sample_zero_cells_2d, Interval, IntervalBox, Mode,
};
use expset_core::parser::{parse_epoly, parse_lifted};
use expset_core::poly::rat;
use expset_core::EPoly;
use proptest::prelude::*;

fn boxed(n: usize) -> impl Strategy<Value = (IntervalBox, Vec<Vec<f64>>)> {
    let side = (-1.5f64..1.5, 0.0f64..0.8).prop_map(|(lo, w)| Interval::new(lo, lo + w));
    (proptest::collection::vec(side, n), proptest::collection::vec(proptest::collection::vec(0.0f64..=1.0, n), 4))
        .prop_map(|(sides, fractions)| {
            let points = fractions
                .into_iter()
                .map(|fr| sides.iter().zip(fr).map(|(s, t)| (s.lo + t * s.width()).min(s.hi)).collect())
                .collect();
            (IntervalBox::new(sides), points)
        })
}

fn brackets(roots: &[expset_core::numeric::RootCert], a: f64, b: f64) -> bool {
    roots.iter().any(|r| r.enclosure.lo <= b + 1e-9 && a - 1e-9 <= r.enclosure.hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn fast_enclosures_contain_point_values(f in epoly(2), (b, points) in boxed(2)) {
        let enc = interval_eval(&f, &b, Mode::Fast);
        for p in points {
            let v = f.eval_f64(&p);
            let slack = 1e-12 * v.abs().max(1.0);
            prop_assert!(enc.lo - slack <= v && v <= enc.hi + slack, "{} outside {:?} at {:?}", v, enc, p);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rigorous_enclosures_contain_point_values(f in epoly(2), (b, points) in boxed(2)) {
        let enc = interval_eval(&f, &b, Mode::Rigorous);
        let fast = interval_eval(&f, &b, Mode::Fast);
        prop_assert!(enc.intersect(&fast).is_some());
        for p in points {
            let v = f.eval_f64(&p);
            let slack = 1e-12 * v.abs().max(1.0);
            prop_assert!(enc.lo - slack <= v && v <= enc.hi + slack, "{} outside {:?} at {:?}", v, enc, p);
        }
    }

    #[test]
    fn sign_changes_fall_in_reported_enclosures(f in epoly(1)) {
        prop_assume!(!f.is_identically_zero());
        let roots = isolate_roots_1d(&f, Interval::new(-3.0, 3.0), 1e-9, Mode::Fast).unwrap();
        for w in roots.windows(2) {
            prop_assert!(w[0].enclosure.hi < w[1].enclosure.lo, "enclosures overlap");
        }
        let steps = 6000;
        let xs: Vec<f64> = (0..=steps).map(|k| -3.0 + 6.0 * k as f64 / steps as f64).collect();
        for w in xs.windows(2) {
            let (ya, yb) = (f.eval_f64(&[w[0]]), f.eval_f64(&[w[1]]));
            if ya == 0.0 || ya.signum() != yb.signum() {
                prop_assert!(brackets(&roots, w[0], w[1]), "missed zero in [{}, {}] of {}", w[0], w[1], f);
            }
        }
    }

    #[test]
    fn transversality_is_scale_invariant(c in nonzero_coeff()) {
        let p = parse_lifted("2*x1 - u1 + 1", None).unwrap();
        let root = IntervalBox::new(vec![Interval::new(1.2564312086261522, 1.2564312086261884)]);
        let a = check_transversality(&p, &root, 1e-6, Mode::Fast).unwrap();
        let b = check_transversality(&p.scale(&c), &root, 1e-6, Mode::Fast).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.tangency_margin - b.tangency_margin).abs() < 1e-9);
    }
}

fn cell_inside(c: &IntervalBox, cells: &[IntervalBox]) -> bool {
    cells.iter().any(|p| c.subset_of(p))
}

#[test]
fn deeper_subdivision_refines_shallower() {
    let square = IntervalBox::new(vec![Interval::new(-2.0, 2.0); 2]);
    for text in ["x1*exp(x2) + x2*exp(x1) - x1 - x2", "x1^2 + x2^2 - 1", "x2 - exp(x1) + 1"] {
        let f = parse_epoly(text).unwrap();
        let mut prev = sample_zero_cells_2d(&f, &square, 3, Mode::Fast).unwrap();
        for depth in 4..=7 {
            let next = sample_zero_cells_2d(&f, &square, depth, Mode::Fast).unwrap();
            assert!(!next.is_empty(), "{text} at depth {depth}");
            assert!(next.iter().all(|c| cell_inside(c, &prev)), "{text} at depth {depth}");
            prev = next;
        }
    }
}

#[test]
fn rigorous_sampler_keeps_cells_near_the_axes() {
    let f = parse_epoly("x1*exp(x2) + x2*exp(x1) - x1 - x2").unwrap();
    let square = IntervalBox::new(vec![Interval::new(-2.0, 2.0); 2]);
    let cells = sample_zero_cells_2d(&f, &square, 5, Mode::Rigorous).unwrap();
    assert!(!cells.is_empty());
    let w = 4.0 / 32.0;
    for c in &cells {
        let s = c.sides();
        assert!(s[0].mig() <= 2.0 * w || s[1].mig() <= 2.0 * w, "{c:?}");
    }
}

#[test]
fn scaling_leaves_root_set_unchanged() {
    let f = parse_epoly("2*x1 + 1 - exp(x1)").unwrap();
    let g: EPoly = f.scale(&rat(-7));
    let a = isolate_roots_1d(&f, Interval::new(-5.0, 5.0), 1e-9, Mode::Fast).unwrap();
    let b = isolate_roots_1d(&g, Interval::new(-5.0, 5.0), 1e-9, Mode::Fast).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!(x.enclosure.intersect(&y.enclosure).is_some());
    }
}
