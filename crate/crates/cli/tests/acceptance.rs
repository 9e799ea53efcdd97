//! Acceptance checks run against the built `expset` binary and the core library.
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use expset_core::epoly::expand_e;
use expset_core::hyperplanes::candidate_hyperplanes;
use expset_core::numeric::isolate_roots_1d;
use expset_core::numeric::{Interval, Mode};
use expset_core::poly::ratio;
use expset_core::{EPoly, Hyperplane, Mono, Poly, Rat, Spectrum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const AXES: &str = "x1*u2 + x2*u1 - x1 - x2";
const LINE: &str = "2*x1 + 1 - exp(x1)";
const CUBIC: &str = "(x1 + u1 - 1)*((2*x1 - u1 + 1)^2 + x2^2) + (2*x1 - u1 + 1)^3";
const SLICE: &str = "x1^2 + (x2^2 + (u1 - 1)^2 - 1)^2";

type Check = Result<(), String>;

struct Run {
    code: i32,
    json: Value,
    elapsed: Duration,
}

fn expset(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_expset"))
        .args(args)
        .output()
        .expect("spawn expset");
    let elapsed = start.elapsed();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().unwrap_or(-1),
        json,
        elapsed,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f64_at(v: &Value, pointer: &str) -> f64 {
    v.pointer(pointer).and_then(Value::as_f64).unwrap_or(f64::NAN)
}

fn nonzero_root() -> Interval {
    let f = expset_core::parser::parse_epoly(LINE).unwrap();
    let roots = isolate_roots_1d(&f, Interval::new(1.0, 2.0), 1e-12, Mode::Fast).unwrap();
    roots[0].enclosure
}

fn normals(list: &Value) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = list
        .as_array()
        .into_iter()
        .flatten()
        .map(|h| {
            h["hyperplane"]
                .as_array()
                .unwrap()
                .iter()
                .map(|c| c.as_i64().unwrap())
                .collect()
        })
        .collect();
    out.sort();
    out
}

fn decomposition() -> Check {
    let r = expset(&["classify", AXES]);
    ensure(r.code == 0, || format!("exit code {}", r.code))?;
    let res = &r.json["result"];
    ensure(res["verdict"] == "HyperplaneComponents", || format!("verdict {}", res["verdict"]))?;
    let certified = normals(&res["hyperplanes"]);
    ensure(certified == vec![vec![0, 1], vec![1, 0]], || format!("certified {certified:?}"))?;
    let all_symbolic = res["hyperplanes"]
        .as_array()
        .unwrap()
        .iter()
        .all(|h| h["symbolic"] == true);
    ensure(all_symbolic, || "certificate not symbolic".into())?;
    let rejected = normals(&res["rejected"]);
    ensure(rejected == vec![vec![1, -1]], || format!("rejected {rejected:?}"))?;
    ensure(r.elapsed < Duration::from_secs(1), || format!("took {:?}", r.elapsed))
}

fn root_count() -> Check {
    let r = expset(&["roots", LINE, "--domain", "-5", "5"]);
    ensure(r.code == 0, || format!("exit code {}", r.code))?;
    let roots = r.json["result"]["roots"].as_array().cloned().unwrap_or_default();
    ensure(roots.len() == 2, || format!("{} roots", roots.len()))?;
    let iv: Vec<(f64, f64)> = roots
        .iter()
        .map(|c| (f64_at(c, "/enclosure/lo"), f64_at(c, "/enclosure/hi")))
        .collect();
    ensure(iv[0].1 < iv[1].0, || "enclosures overlap".into())?;
    ensure(iv[0].0 <= 0.0 && 0.0 <= iv[0].1, || format!("first root {:?}", iv[0]))?;
    let (lo, hi) = iv[1];
    ensure(1.25 <= lo && hi <= 1.26 && hi - lo <= 1e-9, || format!("second root {:?}", iv[1]))?;
    let uncertified = f64_at(&r.json, "/result/uncertifiedCount");
    ensure(uncertified == 0.0, || "uncertified roots reported".into())?;

    let f = |x: f64| 2.0 * x + 1.0 - x.exp();
    let steps = 100_000;
    let mut changes = 0;
    let mut prev = f(-5.0);
    for k in 1..=steps {
        let x = -5.0 + 10.0 * k as f64 / steps as f64;
        let y = f(x);
        if y == 0.0 || (prev != 0.0 && y.signum() != prev.signum()) {
            changes += 1;
        }
        prev = y;
    }
    ensure(changes == 2, || format!("sign scan found {changes}"))?;
    ensure(r.elapsed < Duration::from_secs(1), || format!("took {:?}", r.elapsed))
}

fn line_and_point() -> Check {
    let r = expset(&["classify", CUBIC]);
    ensure(r.code == 0, || format!("exit code {}", r.code))?;
    let hps = &r.json["result"]["hyperplanes"];
    ensure(normals(hps) == vec![vec![1, 0]], || format!("certified {hps}"))?;
    ensure(hps[0]["symbolic"] == true, || "x1 = 0 not symbolic".into())?;
    let restricted = expset_core::parser::parse_epoly(CUBIC)
        .unwrap()
        .restrict_to_hyperplane(&Hyperplane::coordinate(2, 0))
        .unwrap();
    ensure(restricted.is_identically_zero(), || format!("restriction {restricted}"))?;

    let s = expset(&["sample2d", CUBIC, "--depth", "8", "--box", "-2", "2", "-2", "2"]);
    ensure(s.code == 0, || format!("sample2d exit code {}", s.code))?;
    let w = f64_at(&s.json, "/result/cellWidth/0").max(f64_at(&s.json, "/result/cellWidth/1"));
    let xs = nonzero_root().mid();
    let cells = s.json["result"]["cells"].as_array().cloned().unwrap_or_default();
    ensure(!cells.is_empty(), || "no cells".into())?;
    for c in &cells {
        let (x0, x1) = (f64_at(c, "/0/lo"), f64_at(c, "/0/hi"));
        let (y0, y1) = (f64_at(c, "/1/lo"), f64_at(c, "/1/hi"));
        let to_line = if x0 <= 0.0 && 0.0 <= x1 { 0.0 } else { x0.abs().min(x1.abs()) };
        let dx = (x0 - xs).max(xs - x1).max(0.0);
        let dy = y0.max(-y1).max(0.0);
        let to_point = dx.hypot(dy);
        ensure(to_line.min(to_point) <= 2.0 * w, || format!("far cell {c}"))?;
    }
    Ok(())
}

fn slice_points() -> Check {
    let r = expset(&["classify1e", SLICE]);
    ensure(r.code == 0, || format!("exit code {}", r.code))?;
    let slice = &r.json["result"]["slice"];
    ensure(slice["polynomial"] == "x2^4 - 2*x2^2 + 1", || format!("slice {}", slice["polynomial"]))?;
    let mut factors: Vec<(String, u64)> = slice["factors"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|f| (f["factor"].as_str().unwrap().to_string(), f["multiplicity"].as_u64().unwrap()))
        .collect();
    factors.sort();
    let want = vec![("x2 + 1".to_string(), 2), ("x2 - 1".to_string(), 2)];
    ensure(factors == want, || format!("factors {factors:?}"))?;
    let mut exact: Vec<String> = slice["components"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|c| c["certified"] == true)
        .filter_map(|c| c["exact"].as_str().map(String::from))
        .collect();
    exact.sort();
    ensure(exact == vec!["-1".to_string(), "1".to_string()], || format!("components {exact:?}"))
}

fn transversality() -> Check {
    let root = nonzero_root();
    let (lo, hi) = (root.lo.to_string(), root.hi.to_string());
    for (f, extra) in [("2*x1 - u1 + 1", &[][..]), (CUBIC, &["--coord", "0", "0"][..])] {
        let mut args = vec!["transversal", f, "--root", &lo, &hi];
        args.extend_from_slice(extra);
        let r = expset(&args);
        ensure(r.code == 0, || format!("{f}: exit code {}", r.code))?;
        ensure(r.json["result"]["verdict"] == "Transverse", || format!("{f}: {}", r.json["result"]["verdict"]))?;
        let margin = f64_at(&r.json, "/result/tangencyMargin");
        ensure(margin > 1e-6, || format!("{f}: margin {margin}"))?;
    }
    let z = expset(&["transversal", "2*x1 - u1 + 1", "--root", "-1e-9", "1e-9"]);
    ensure(z.code == 2, || format!("zero root exit code {}", z.code))?;
    ensure(z.json["error"]["kind"] == "hypothesis", || format!("error {}", z.json["error"]))
}

fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let n = rng.gen_range(-9i64..=9);
        if n != 0 {
            return ratio(n, rng.gen_range(1i64..=4));
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, u_vectors: &[Vec<u32>], terms: usize) -> Poly {
    let items = (0..terms).map(|_| {
        let x_exp = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let u_exp = u_vectors.choose(rng).unwrap().clone();
        (Mono { x_exp, u_exp }, small_rat(rng))
    });
    let items: Vec<_> = items.collect();
    Poly::from_terms(n, items)
}

fn distinct_u(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<u32>> {
    let mut set = std::collections::BTreeSet::new();
    let mut guard = 0;
    while set.len() < m && guard < 1000 {
        set.insert((0..n).map(|_| rng.gen_range(0..4)).collect::<Vec<u32>>());
        guard += 1;
    }
    set.into_iter().collect()
}

fn candidate_bound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..100 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=8);
        let us = distinct_u(&mut rng, n, m);
        let p = random_poly(&mut rng, n, &us, 12);
        let distinct = expset_core::hyperplanes::u_exponent_vectors(&p).len();
        let c = candidate_hyperplanes(&p);
        ensure(distinct <= 8, || format!("case {case}: {distinct} vectors"))?;
        let bound = distinct * distinct.saturating_sub(1) / 2;
        ensure(c.hyperplanes.len() <= bound, || format!("case {case}: {} > {bound}", c.hyperplanes.len()))?;

        let mut terms: Vec<(Mono, Rat)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.shuffle(&mut rng);
        let permuted = Poly::from_terms(n, terms);
        ensure(candidate_hyperplanes(&permuted) == c, || format!("case {case}: permutation changed set"))?;
        let scaled = p.scale(&small_rat(&mut rng));
        ensure(candidate_hyperplanes(&scaled) == c, || format!("case {case}: scaling changed set"))?;
    }
    Ok(())
}

fn ring_homomorphism() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..500 {
        let n = rng.gen_range(1..=3);
        let us = distinct_u(&mut rng, n, 3);
        let (a, b) = (rng.gen_range(0..6), rng.gen_range(0..6));
        let p = random_poly(&mut rng, n, &us, a);
        let q = random_poly(&mut rng, n, &us, b);
        let (ep, eq) = (expand_e(&p), expand_e(&q));
        ensure(expand_e(&(&p + &q)) == &ep + &eq, || format!("case {case}: sum"))?;
        ensure(expand_e(&(&p * &q)) == &ep * &eq, || format!("case {case}: product"))?;
        ensure(expand_e(&-&p) == -&ep, || format!("case {case}: negation"))?;
        ensure(ep.is_identically_zero() == p.is_zero(), || format!("case {case}: zero test on {p}"))?;
        let diff = &p - &q;
        ensure(expand_e(&diff).is_identically_zero() == (p == q), || format!("case {case}: injectivity"))?;
        let cancel = &p - &p;
        ensure(expand_e(&cancel).is_identically_zero(), || format!("case {case}: p - p"))?;
    }
    Ok(())
}

fn random_epoly(rng: &mut ChaCha8Rng, n: usize) -> EPoly {
    let mut f = EPoly::zero(n);
    for _ in 0..rng.gen_range(1..=4) {
        let lambda = Spectrum((0..n).map(|_| ratio(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=2))).collect());
        let coeff = random_poly(rng, n, &[vec![0; n]], 3);
        f = &f + &EPoly::term(lambda, coeff);
    }
    f
}

fn derivatives() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = 1e-6;
    for case in 0..20 {
        let n = rng.gen_range(1..=3);
        let f = random_epoly(&mut rng, n);
        let grad = f.gradient();
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for (i, d) in grad.iter().enumerate() {
                let mut plus = x.clone();
                let mut minus = x.clone();
                plus[i] += h;
                minus[i] -= h;
                let fd = (f.eval_f64(&plus) - f.eval_f64(&minus)) / (2.0 * h);
                let exact = d.eval_f64(&x);
                let err = (fd - exact).abs() / exact.abs().max(1.0);
                ensure(err <= 1e-5, || format!("case {case}: d/dx{} of {f} at {x:?}: {fd} vs {exact}", i + 1))?;
            }
        }
    }
    Ok(())
}

fn corpus() -> Check {
    let r = expset(&["verify-paper"]);
    ensure(r.code == 0, || format!("exit code {}, failed {}", r.code, r.json["result"]["failed"]))?;
    ensure(r.json["result"]["failed"] == 0, || format!("failed {}", r.json["result"]["failed"]))?;
    ensure(r.elapsed < Duration::from_secs(30), || format!("took {:?}", r.elapsed))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("two-axes decomposition", decomposition),
        ("root count of 2x+1-exp(x)", root_count),
        ("line plus isolated point", line_and_point),
        ("single-exponential slice", slice_points),
        ("transversality at nonzero roots", transversality),
        ("candidate hyperplane bound", candidate_bound),
        ("expansion is an injective ring map", ring_homomorphism),
        ("derivatives against finite differences", derivatives),
        ("verify-paper corpus", corpus),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {} {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
