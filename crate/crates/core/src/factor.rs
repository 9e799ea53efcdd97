//! Univariate factorization over `Q`.
//!
//! Classical Zassenhaus pipeline: content and square-free decomposition over `Q`,
//! Cantor-Zassenhaus factorization modulo a small prime, multifactor Hensel
//! lifting to a power of that prime past the Mignotte bound, then recombination
//! of lifted factors by trial division over `Z`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::Rat;
use crate::upoly::UniPoly;

/// `content * prod(factor^multiplicity)`; factors are primitive integer
/// polynomials with positive leading coefficient, sorted by degree then coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub content: Rat,
    pub factors: Vec<(UniPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.content.clone()), |acc, (f, k)| {
                acc.mul(&f.pow(*k))
            })
    }

    /// A single factor of multiplicity one.
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }
}

/// Exact factorization of a nonzero univariate polynomial over `Q`.
pub fn factor_univariate(q: &UniPoly) -> Result<Factorization> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, prim) = q.content_primitive();
    let mut factors: Vec<(Vec<BigInt>, u32)> = Vec::new();

    // powers of t
    let zeros = prim.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        factors.push((vec![BigInt::zero(), BigInt::one()], zeros as u32));
    }
    let rest = UniPoly::from_bigints(&prim[zeros..]);

    if rest.degree().unwrap_or(0) > 0 {
        for (part, mult) in square_free(&rest) {
            let (_, part) = part.content_primitive();
            for irr in zassenhaus(&part) {
                factors.push((irr, mult));
            }
        }
    }

    factors.sort_by(|a, b| {
        a.0.len()
            .cmp(&b.0.len())
            .then_with(|| a.0.iter().rev().cmp(b.0.iter().rev()))
            .then_with(|| a.1.cmp(&b.1))
    });
    let factors: Vec<(UniPoly, u32)> = factors
        .into_iter()
        .map(|(f, k)| (UniPoly::from_bigints(&f), k))
        .collect();
    let unit = factors
        .iter()
        .fold(UniPoly::constant(Rat::one()), |acc, (f, k)| acc.mul(&f.pow(*k)));
    let content = q.leading() / unit.leading();
    let out = Factorization { content, factors };
    debug_assert_eq!(&out.expand(), q);
    Ok(out)
}

/// Yun's algorithm; returns `(a_i, i)` with `f = c * prod a_i^i`, each `a_i` square-free.
fn square_free(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let mut c = df.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Integer polynomial helpers (ascending coefficient vectors)
// ---------------------------------------------------------------------------

type ZPoly = Vec<BigInt>;

fn ztrim(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let neg: ZPoly = b.iter().map(|c| -c).collect();
    zadd(a, &neg)
}

fn zmod(p: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(p.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsymmetric(p: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m >> 1;
    ztrim(
        p.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut rem = zmod(a, m);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let q = rem[k + db].mod_floor(m);
        if q.is_zero() {
            continue;
        }
        for (j, c) in b.iter().enumerate() {
            rem[k + j] = (&rem[k + j] - &q * c).mod_floor(m);
        }
        quot[k] = q;
    }
    rem.truncate(db);
    (ztrim(quot), ztrim(rem))
}

/// Exact division over `Z`.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return if rem.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let (q, r) = rem[k + db].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if q.is_zero() {
            continue;
        }
        for (j, c) in b.iter().enumerate() {
            rem[k + j] -= &q * c;
        }
        quot[k] = q;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(ztrim(quot))
}

fn zprimitive(p: &[BigInt]) -> ZPoly {
    let mut g = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if p.last().is_some_and(Signed::is_negative) {
        g = -g;
    }
    if g.is_zero() {
        return p.to_vec();
    }
    p.iter().map(|c| c / &g).collect()
}

// ---------------------------------------------------------------------------
// Arithmetic in F_p[t]
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Fp(u64);

impl Fp {
    fn mulm(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn powm(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulm(acc, a);
            }
            a = self.mulm(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv(self, a: u64) -> u64 {
        self.powm(a, self.0 - 2)
    }

    fn trim(self, mut p: Vec<u64>) -> Vec<u64> {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    fn from_z(self, p: &[BigInt]) -> Vec<u64> {
        let m = BigInt::from(self.0);
        self.trim(p.iter().map(|c| c.mod_floor(&m).to_u64().unwrap()).collect())
    }

    fn sub(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        self.trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + self.0 - b.get(i).unwrap_or(&0)) % self.0)
                .collect(),
        )
    }

    fn mul(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mulm(x, y)) % self.0;
            }
        }
        self.trim(out)
    }

    fn scale(self, a: &[u64], c: u64) -> Vec<u64> {
        self.trim(a.iter().map(|&x| self.mulm(x, c)).collect())
    }

    fn monic(self, a: &[u64]) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, self.inv(lc)),
        }
    }

    fn divrem(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        let mut rem = a.to_vec();
        if rem.len() <= db {
            return (Vec::new(), self.trim(rem));
        }
        let mut quot = vec![0u64; rem.len() - db];
        for k in (0..quot.len()).rev() {
            let q = self.mulm(rem[k + db], inv);
            if q == 0 {
                continue;
            }
            for (j, &c) in b.iter().enumerate() {
                rem[k + j] = (rem[k + j] + self.0 - self.mulm(q, c)) % self.0;
            }
            quot[k] = q;
        }
        rem.truncate(db);
        (self.trim(quot), self.trim(rem))
    }

    fn gcd(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.divrem(&a, &b).1;
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(s, t)` with `s*a + t*b = 1` for coprime `a`, `b`.
    fn ext_gcd(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        debug_assert_eq!(r0.len(), 1);
        let inv = self.inv(r0[0]);
        (self.scale(&s0, inv), self.scale(&t0, inv))
    }

    fn derivative(self, a: &[u64]) -> Vec<u64> {
        self.trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| self.mulm(c, k as u64 % self.0))
                .collect(),
        )
    }

    fn powmod(self, base: &[u64], e: &BigUint, modulus: &[u64]) -> Vec<u64> {
        let mut acc = vec![1u64];
        let base = self.divrem(base, modulus).1;
        for i in (0..e.bits()).rev() {
            acc = self.divrem(&self.mul(&acc, &acc), modulus).1;
            if e.bit(i) {
                acc = self.divrem(&self.mul(&acc, &base), modulus).1;
            }
        }
        acc
    }

    /// Distinct-degree factorization of a monic square-free polynomial.
    fn ddf(self, f: &[u64]) -> Vec<(Vec<u64>, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let p = BigUint::from(self.0);
        let mut d = 1;
        while 2 * d < f.len() {
            h = self.powmod(&h, &p, &f);
            let g = self.gcd(&f, &self.sub(&h, &x));
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.divrem(&h, &f).1;
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
        }
        out
    }

    /// Equal-degree splitting (odd `p`).
    fn edf(self, g: &[u64], d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        let n = g.len() - 1;
        if n == d {
            return vec![g.to_vec()];
        }
        let e = (BigUint::from(self.0).pow(d as u32) - 1u32) >> 1;
        loop {
            let a: Vec<u64> = self.trim((0..n).map(|_| rng.gen_range(0..self.0)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, g), &[1]);
            let h = self.gcd(g, &b);
            if h.len() > 1 && h.len() < g.len() {
                let other = self.monic(&self.divrem(g, &h).0);
                let mut out = self.edf(&h, d, rng);
                out.extend(self.edf(&other, d, rng));
                return out;
            }
        }
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

// ---------------------------------------------------------------------------
// Hensel lifting
// ---------------------------------------------------------------------------

fn lift_z(p: &[u64]) -> ZPoly {
    p.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from `f = g h`, `s g + t h = 1 (mod m)` to the same mod `m^2`.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m2: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let e = zmod(&zsub(f, &zmul(g, h)), m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, m2);
    let g1 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), m2);
    let h1 = zmod(&zadd(h, &r), m2);
    let b = zmod(&zsub(&zadd(&zmul(s, &g1), &zmul(t, &h1)), &[BigInt::one()]), m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h1, m2);
    let s1 = zmod(&zsub(s, &d), m2);
    let t1 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g1)), m2);
    (g1, h1, s1, t1)
}

/// Lifts `f = lc * prod(factors) (mod p)` to monic factors modulo `p^(2^steps)`.
fn multi_lift(f: &[BigInt], factors: &[Vec<u64>], fp: Fp, steps: u32) -> Vec<ZPoly> {
    let p = BigInt::from(fp.0);
    let modulus = (0..steps).fold(p.clone(), |m, _| &m * &m);
    if factors.len() == 1 {
        let lc = f.last().unwrap().mod_floor(&modulus);
        let inv = lc.extended_gcd(&modulus).x.mod_floor(&modulus);
        let scaled: ZPoly = f.iter().map(|c| c * &inv).collect();
        return vec![zmod(&scaled, &modulus)];
    }
    let k = factors.len() / 2;
    let lcp = fp.from_z(&[f.last().unwrap().clone()]);
    let g0 = factors[..k].iter().fold(lcp, |acc, u| fp.mul(&acc, u));
    let h0 = factors[k..].iter().fold(vec![1u64], |acc, u| fp.mul(&acc, u));
    let (s0, t0) = fp.ext_gcd(&g0, &h0);
    let (mut g, mut h, mut s, mut t) = (lift_z(&g0), lift_z(&h0), lift_z(&s0), lift_z(&t0));
    let mut m = p;
    for _ in 0..steps {
        m = &m * &m;
        (g, h, s, t) = hensel_step(f, &g, &h, &s, &t, &m);
    }
    let mut out = multi_lift(&g, &factors[..k], fp, steps);
    out.extend(multi_lift(&h, &factors[k..], fp, steps));
    out
}

// ---------------------------------------------------------------------------
// Zassenhaus
// ---------------------------------------------------------------------------

/// Factors a primitive square-free integer polynomial with positive leading coefficient.
fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let f = ztrim(f.to_vec());
    let deg = f.len() - 1;
    if deg <= 1 {
        return vec![f];
    }
    let lc = f[deg].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // up to three admissible primes; keep the one with fewest modular factors
    let mut best: Option<(Fp, Vec<(Vec<u64>, usize)>, usize)> = None;
    let mut admissible = 0;
    for p in small_primes().take(400) {
        let fp = Fp(p);
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fm = fp.from_z(&f);
        if fp.gcd(&fm, &fp.derivative(&fm)).len() != 1 {
            continue;
        }
        let dd = fp.ddf(&fp.monic(&fm));
        let count: usize = dd.iter().map(|(g, d)| (g.len() - 1) / d).sum();
        if count == 1 {
            return vec![f];
        }
        if best.as_ref().is_none_or(|b| count < b.2) {
            best = Some((fp, dd, count));
        }
        admissible += 1;
        if admissible == 3 {
            break;
        }
    }
    let (fp, dd, _) = best.expect("an admissible prime exists for a square-free polynomial");
    let mut modular: Vec<Vec<u64>> = Vec::new();
    for (g, d) in dd {
        modular.extend(fp.edf(&g, d, &mut rng));
    }
    modular.sort();

    // coefficient bound for lc * (factor / lc(factor))
    let norm2 = f.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b).sqrt() + 1u32;
    let bound = (BigInt::one() << deg) * norm2 * lc.abs() * 2u32;
    let p = BigInt::from(fp.0);
    let mut steps = 0u32;
    let mut modulus = p.clone();
    while modulus <= bound {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    let lifted = multi_lift(&f, &modular, fp, steps);
    recombine(f, lifted, &modulus)
}

fn recombine(mut f: ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let lc = f.last().unwrap().clone();
        for subset in combinations(lifted.len(), size) {
            let cand = subset
                .iter()
                .fold(vec![lc.clone()], |acc, &i| zmod(&zmul(&acc, &lifted[i]), modulus));
            let cand = zprimitive(&zsymmetric(&cand, modulus));
            if let Some(q) = zdiv_exact(&f, &cand) {
                out.push(cand);
                f = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                continue 'outer;
            }
        }
        size += 1;
    }
    out.push(zprimitive(&f));
    out
}

/// k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn difference_of_squares_splits() {
        let f = factor_univariate(&up(&[-1, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(up(&[-1, 1]), 1), (up(&[1, 1]), 1)]);
        assert_eq!(f.content, Rat::one());
    }

    #[test]
    fn sum_of_squares_is_irreducible() {
        let f = factor_univariate(&up(&[1, 0, 1])).unwrap();
        assert!(f.is_irreducible());
    }

    #[test]
    fn content_and_linear_factors() {
        // 6x^3 - 9x^2 - 15x = 3 * x * (x + 1) * (2x - 5)
        let f = factor_univariate(&up(&[0, -15, -9, 6])).unwrap();
        assert_eq!(f.content, Rat::from_integer(3.into()));
        assert_eq!(
            f.factors,
            vec![(up(&[0, 1]), 1), (up(&[1, 1]), 1), (up(&[-5, 2]), 1)]
        );
        assert_eq!(f.expand(), up(&[0, -15, -9, 6]));
    }

    #[test]
    fn repeated_factors() {
        // (x^2 - 1)^2
        let f = factor_univariate(&up(&[1, 0, -2, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(up(&[-1, 1]), 2), (up(&[1, 1]), 2)]);
    }

    #[test]
    fn swinnerton_dyer_like_recombination() {
        // x^4 - 10x^2 + 1 is irreducible but splits modulo every prime
        let f = factor_univariate(&up(&[1, 0, -10, 0, 1])).unwrap();
        assert!(f.is_irreducible());
        // (x^4 - 10x^2 + 1)(x^2 - 2)
        let g = up(&[1, 0, -10, 0, 1]).mul(&up(&[-2, 0, 1]));
        let f = factor_univariate(&g).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(), g);
    }

    #[test]
    fn rational_content() {
        let g = up(&[3, -2]).scale(&Rat::new((-1).into(), 6.into()));
        let f = factor_univariate(&g).unwrap();
        assert_eq!(f.factors, vec![(up(&[-3, 2]), 1)]);
        assert_eq!(f.content, Rat::new(1.into(), 6.into()));
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(factor_univariate(&UniPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}
