mod common;

use common::*;
use expset_core::epoly::expand_e;
use expset_core::hyperplanes::{candidate_hyperplanes, u_exponent_vectors};
use expset_core::parser::{parse_epoly_in, parse_poly_in};
use expset_core::{Hyperplane, LinearForm, Mono, Poly, Rat, Var};
use proptest::prelude::*;

fn lifted_point(x: &[f64]) -> Vec<f64> {
    x.iter().copied().chain(x.iter().map(|v| v.exp())).collect()
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(p in poly(2, 5), q in poly(2, 5), r in poly(2, 5)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p + &Poly::zero(2), p.clone());
        prop_assert_eq!(&p * &Poly::one(2), p.clone());
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(2, 5), q in poly(2, 5), pt in rat_point(4)) {
        let (a, b) = (p.eval(&pt).unwrap(), q.eval(&pt).unwrap());
        prop_assert_eq!((&p + &q).eval(&pt).unwrap(), &a + &b);
        prop_assert_eq!((&p * &q).eval(&pt).unwrap(), &a * &b);
    }

    #[test]
    fn leibniz_rule(p in poly(2, 5), q in poly(2, 5), slot in 0usize..4) {
        let v = Var::from_slot(slot, 2);
        let lhs = (&p * &q).derivative(v);
        let rhs = &(&p.derivative(v) * &q) + &(&p * &q.derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_commutes_with_evaluation(
        p in poly(2, 5),
        slot in 0usize..4,
        coeffs in rat_point(4),
        constant in coeff(),
        pt in rat_point(4),
    ) {
        let var = Var::from_slot(slot, 2);
        let mut form = LinearForm::zero(2);
        for (j, c) in coeffs.into_iter().enumerate() {
            if j != slot {
                form.coeffs[j] = c;
            }
        }
        form.constant = constant;
        let value = form.to_poly().eval(&pt).unwrap();
        let mut moved = pt.clone();
        moved[slot] = value;
        let substituted = p.substitute_linear(var, &form).unwrap();
        prop_assert_eq!(substituted.eval(&pt).unwrap(), p.eval(&moved).unwrap());
    }

    #[test]
    fn expansion_is_an_injective_ring_map(p in poly(2, 5), q in poly(2, 5)) {
        let (ep, eq) = (expand_e(&p), expand_e(&q));
        prop_assert_eq!(expand_e(&(&p + &q)), &ep + &eq);
        prop_assert_eq!(expand_e(&(&p * &q)), &ep * &eq);
        prop_assert_eq!(ep.is_identically_zero(), p.is_zero());
        prop_assert_eq!(expand_e(&(&p - &q)).is_identically_zero(), p == q);
    }

    #[test]
    fn expansion_matches_lifted_evaluation(p in poly(2, 5), x in point(2)) {
        let direct = p.eval_f64(&lifted_point(&x));
        prop_assert!(close(expand_e(&p).eval_f64(&x), direct, 1e3 * direct.abs()));
    }

    #[test]
    fn derivative_matches_central_difference(f in epoly(2), x in point(2), i in 0usize..2) {
        let d = f.derivative(i).unwrap();
        let h = 1e-6;
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[i] += h;
        minus[i] -= h;
        let fd = (f.eval_f64(&plus) - f.eval_f64(&minus)) / (2.0 * h);
        let exact = d.eval_f64(&x);
        prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{} vs {}", fd, exact);
    }

    #[test]
    fn candidates_respect_pair_bound_and_invariances(p in poly(3, 8), c in nonzero_coeff(), rot in 0usize..8) {
        let m = u_exponent_vectors(&p).len();
        let set = candidate_hyperplanes(&p);
        prop_assert!(set.hyperplanes.len() <= m * m.saturating_sub(1) / 2);
        prop_assert_eq!(set.degenerate, m <= 1);
        let mut terms: Vec<(Mono, Rat)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        if !terms.is_empty() {
            let k = rot % terms.len();
            terms.rotate_left(k);
            terms.reverse();
        }
        prop_assert_eq!(candidate_hyperplanes(&Poly::from_terms(3, terms)), set.clone());
        prop_assert_eq!(candidate_hyperplanes(&p.scale(&c)), set);
    }

    #[test]
    fn restriction_agrees_numerically(f in epoly(2), a in -3i64..=3, b in -3i64..=3, t in -1.5f64..1.5) {
        prop_assume!(a != 0 || b != 0);
        let h = Hyperplane::primitive_normalize(&[a, b]).unwrap();
        let r = f.restrict_to_hyperplane(&h).unwrap();
        let x = h.embed(&[t]);
        let full = f.eval_f64(&x);
        prop_assert!(close(r.eval_f64(&[t]), full, 1e3 * full.abs()), "{} vs {}", r.eval_f64(&[t]), full);
    }

    #[test]
    fn printed_polynomials_parse_back(p in poly(3, 6)) {
        let text = p.to_string();
        prop_assert_eq!(parse_poly_in(&text, Some(3)).unwrap(), p);
    }

    #[test]
    fn printed_epolynomials_parse_back(p in poly(2, 6)) {
        let f = expand_e(&p);
        let text = f.to_string();
        prop_assert_eq!(parse_epoly_in(&text, Some(2)).unwrap(), f);
    }
}
