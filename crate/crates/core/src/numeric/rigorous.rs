//! Intervals with exact dyadic endpoints `m * 2^e`, rounded outward to a fixed
//! binary precision after every operation.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::Interval;
use crate::poly::Rat;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 64;

/// Arguments with `|x| > EXP_LIMIT` give the unbounded enclosure `[0, inf)` or
/// `[lower bound, inf)`.
pub const EXP_LIMIT: i64 = 700;

/// `m * 2^e` with `m` odd, or zero with `e = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

fn shr_floor(m: &BigInt, k: u64) -> BigInt {
    // BigInt >> rounds toward -inf
    m >> k
}

fn shr_ceil(m: &BigInt, k: u64) -> BigInt {
    -((-m) >> k)
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        if m.is_zero() {
            return Dyadic { m, e: 0 };
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        Dyadic { m: m >> tz, e: e + tz as i64 }
    }

    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn one() -> Self {
        Dyadic { m: BigInt::one(), e: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.m.is_positive()
    }

    pub fn abs(&self) -> Self {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.m.bits() as i64 - 1 + self.e)
    }

    /// Exact value of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant);
        Some(Dyadic::new(if x < 0.0 { -m } else { m }, e))
    }

    /// Directed rounding of a rational to `prec` significant bits; exact for
    /// dyadic rationals that fit.
    pub fn from_rat(r: &Rat, prec: u32, upward: bool) -> Self {
        let d = r.denom();
        if d.is_one() || (d.clone() & (d - BigInt::one())).is_zero() {
            let k = d.bits() as i64 - 1;
            return Dyadic::new(r.numer().clone(), -k).round(prec, upward);
        }
        let k = prec as i64 + d.bits() as i64 - r.numer().bits() as i64 + 2;
        let n = if k >= 0 { r.numer() << k as u64 } else { r.numer() >> (-k) as u64 };
        let (q, rem) = n.div_mod_floor(d);
        let q = if upward && !rem.is_zero() { q + 1 } else { q };
        Dyadic::new(q, -k).round(prec, upward)
    }

    pub fn to_rat(&self) -> Rat {
        if self.e >= 0 {
            Rat::from_integer(&self.m << self.e as u64)
        } else {
            Rat::new(self.m.clone(), BigInt::one() << (-self.e) as u64)
        }
    }

    fn approx_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.m.bits() as i64;
        // keep 64 leading bits so the mantissa converts without overflow
        let (m, e) = if b > 64 {
            (shr_floor(&self.m, (b - 64) as u64), self.e + b - 64)
        } else {
            (self.m.clone(), self.e)
        };
        let f = m.to_f64().unwrap_or(0.0);
        let e = e.clamp(-2200, 2200) as i32;
        // two-step scaling keeps intermediates finite
        f * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    pub fn to_f64_down(&self) -> f64 {
        let f = self.approx_f64();
        match Dyadic::from_f64(f) {
            Some(q) if q <= *self => f,
            _ => f.next_down(),
        }
    }

    pub fn to_f64_up(&self) -> f64 {
        let f = self.approx_f64();
        match Dyadic::from_f64(f) {
            Some(q) if q >= *self => f,
            _ => f.next_up(),
        }
    }

    pub fn round(self, prec: u32, upward: bool) -> Self {
        let b = self.m.bits();
        if b <= prec as u64 {
            return self;
        }
        let k = b - prec as u64;
        let m = if upward { shr_ceil(&self.m, k) } else { shr_floor(&self.m, k) };
        Dyadic::new(m, self.e + k as i64)
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &o.m << (o.e - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { m: -&self.m, e: self.e }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.m * &o.m, self.e + o.e)
    }

    pub fn scale2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { m: self.m.clone(), e: self.e + k }
    }

    /// `floor(x * 2^w)` or its ceiling.
    fn fixed(&self, w: i64, upward: bool) -> BigInt {
        let s = self.e + w;
        if s >= 0 {
            &self.m << s as u64
        } else if upward {
            shr_ceil(&self.m, (-s) as u64)
        } else {
            shr_floor(&self.m, (-s) as u64)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sub(other).m.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Rounds `r` to a dyadic with `prec` significant bits, toward -inf or +inf.
pub fn round_dyadic(r: &Rat, prec: u32, upward: bool) -> Rat {
    Dyadic::from_rat(r, prec, upward).to_rat()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatInterval {
    Bounded { lo: Dyadic, hi: Dyadic },
    /// `[lo, +inf)`; arises only from exp overflow.
    Above(Dyadic),
    Entire,
}

/// Extra bits kept when a non-dyadic rational enters an interval.
const ENTRY_PRECISION: u32 = DEFAULT_PRECISION + 16;

impl RatInterval {
    /// Smallest dyadic enclosure of `r` at entry precision; exact when `r` is dyadic.
    pub fn point(r: Rat) -> Self {
        RatInterval::new(r.clone(), r)
    }

    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "empty rational interval");
        RatInterval::Bounded {
            lo: Dyadic::from_rat(&lo, ENTRY_PRECISION, false),
            hi: Dyadic::from_rat(&hi, ENTRY_PRECISION, true),
        }
    }

    /// Exact conversion of finite `f64` endpoints.
    pub fn from_interval(iv: &Interval) -> Self {
        match (Dyadic::from_f64(iv.lo), Dyadic::from_f64(iv.hi)) {
            (Some(lo), Some(hi)) => RatInterval::Bounded { lo, hi },
            (Some(lo), None) if iv.hi == f64::INFINITY => RatInterval::Above(lo),
            _ => RatInterval::Entire,
        }
    }

    /// Outward conversion to `f64` endpoints.
    pub fn to_interval(&self) -> Interval {
        match self {
            RatInterval::Bounded { lo, hi } => Interval {
                lo: lo.to_f64_down(),
                hi: hi.to_f64_up(),
            },
            RatInterval::Above(lo) => Interval {
                lo: lo.to_f64_down(),
                hi: f64::INFINITY,
            },
            RatInterval::Entire => Interval::entire(),
        }
    }

    pub fn contains_zero(&self) -> bool {
        match self {
            RatInterval::Bounded { lo, hi } => !lo.is_positive() && !hi.is_negative(),
            RatInterval::Above(lo) => !lo.is_positive(),
            RatInterval::Entire => true,
        }
    }

    fn round(self, prec: u32) -> Self {
        match self {
            RatInterval::Bounded { lo, hi } => RatInterval::Bounded {
                lo: lo.round(prec, false),
                hi: hi.round(prec, true),
            },
            RatInterval::Above(lo) => RatInterval::Above(lo.round(prec, false)),
            RatInterval::Entire => RatInterval::Entire,
        }
    }

    pub fn add(&self, o: &RatInterval, prec: u32) -> RatInterval {
        use RatInterval::*;
        match (self, o) {
            (Bounded { lo: a, hi: b }, Bounded { lo: c, hi: d }) => Bounded { lo: a.add(c), hi: b.add(d) },
            (Bounded { lo: a, .. } | Above(a), Bounded { lo: c, .. } | Above(c)) => Above(a.add(c)),
            _ => Entire,
        }
        .round(prec)
    }

    pub fn neg(&self) -> RatInterval {
        match self {
            RatInterval::Bounded { lo, hi } => RatInterval::Bounded { lo: hi.neg(), hi: lo.neg() },
            _ => RatInterval::Entire,
        }
    }

    pub fn sub(&self, o: &RatInterval, prec: u32) -> RatInterval {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &RatInterval, prec: u32) -> RatInterval {
        use RatInterval::*;
        match (self, o) {
            (Bounded { lo: a, hi: b }, Bounded { lo: c, hi: d }) => {
                let p = [a.mul(c), a.mul(d), b.mul(c), b.mul(d)];
                let lo = p.iter().min().unwrap().clone();
                let hi = p.iter().max().unwrap().clone();
                Bounded { lo, hi }.round(prec)
            }
            (Bounded { lo, hi }, Above(_)) | (Above(_), Bounded { lo, hi }) if lo.is_zero() && hi.is_zero() => {
                Bounded {
                    lo: Dyadic::zero(),
                    hi: Dyadic::zero(),
                }
            }
            (Bounded { lo: a, .. }, Above(c)) | (Above(c), Bounded { lo: a, .. })
                if !a.is_negative() && !c.is_negative() =>
            {
                Above(a.mul(c)).round(prec)
            }
            (Above(a), Above(c)) if !a.is_negative() && !c.is_negative() => Above(a.mul(c)).round(prec),
            _ => Entire,
        }
    }

    pub fn powi(&self, k: u32, prec: u32) -> RatInterval {
        if k == 0 {
            return RatInterval::Bounded {
                lo: Dyadic::one(),
                hi: Dyadic::one(),
            };
        }
        if let RatInterval::Bounded { lo, hi } = self {
            if k.is_multiple_of(2) && lo.is_negative() && hi.is_positive() {
                let m = lo.abs().max(hi.abs());
                let top = RatInterval::Bounded { lo: m.clone(), hi: m }.powi(k, prec);
                let RatInterval::Bounded { hi, .. } = top else {
                    return RatInterval::Entire;
                };
                return RatInterval::Bounded { lo: Dyadic::zero(), hi };
            }
            if k.is_multiple_of(2) && hi.is_negative() {
                return self.neg().powi(k, prec);
            }
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self, prec);
        }
        acc
    }

    pub fn exp(&self, prec: u32) -> RatInterval {
        match self {
            RatInterval::Bounded { lo, hi } => match (exp_dyadic(lo, prec, false), exp_dyadic(hi, prec, true)) {
                (Some(l), Some(h)) => RatInterval::Bounded { lo: l, hi: h },
                (Some(l), None) => RatInterval::Above(l),
                (None, _) => RatInterval::Above(Dyadic::zero()),
            },
            RatInterval::Above(lo) => RatInterval::Above(exp_dyadic(lo, prec, false).unwrap_or_else(Dyadic::zero)),
            RatInterval::Entire => RatInterval::Above(Dyadic::zero()),
        }
    }

    pub fn mid(&self) -> Option<Rat> {
        match self {
            RatInterval::Bounded { lo, hi } => Some(lo.add(hi).scale2(-1).to_rat()),
            _ => None,
        }
    }
}

/// Lower or upper bound for `e^x`; `None` when `|x| > EXP_LIMIT`.
pub fn exp_bound(x: &Rat, prec: u32, upward: bool) -> Option<Rat> {
    let d = Dyadic::from_rat(x, prec + 32, upward);
    exp_dyadic(&d, prec, upward).map(|v| v.to_rat())
}

/// `x` is scaled exactly by `2^-s` to `|y| < 1/2`, `e^y` is summed in fixed
/// point with `W` fractional bits, and the enclosure is squared `s` times.
///
/// Each fixed-point term `t_k = floor(t_{k-1} Y / (k 2^W))` carries at most
/// 3 units of error in the last place, and the series stops once a term drops
/// below one unit, where the Lagrange remainder `|y|^{N+1} e^{|y|} / (N+1)!` is
/// below 2 units. The sum is widened by `4 (N + 3)` units.
fn exp_dyadic(x: &Dyadic, prec: u32, upward: bool) -> Option<Dyadic> {
    if x.abs() > Dyadic::new(EXP_LIMIT.into(), 0) {
        return None;
    }
    if x.is_zero() {
        return Some(Dyadic::one());
    }
    let s = (x.exponent().unwrap() + 2).max(0);
    let y = x.scale2(-s);
    let work = prec as i64 + 16 + s;
    let w = work + 8;
    let unit = BigInt::one() << w as u64;
    let yf = y.fixed(w, false);
    let mut sum = unit.clone();
    let mut term = unit.clone();
    let mut k = 1i64;
    loop {
        term = (&term * &yf).div_floor(&(&unit * BigInt::from(k)));
        if term.is_zero() || (term.abs() <= BigInt::one() && k > 2) {
            sum += &term;
            break;
        }
        sum += &term;
        k += 1;
        if k > 400 {
            break;
        }
    }
    // Y = floor(y 2^W) may be short by one unit; that moves e^y by under 2 units.
    let slack = BigInt::from(4 * (k + 3) + 2);
    let mut lo = Dyadic::new(&sum - &slack, -w).round(work as u32, false);
    let mut hi = Dyadic::new(&sum + &slack, -w).round(work as u32, true);
    for _ in 0..s {
        lo = lo.mul(&lo).round(work as u32, false);
        hi = hi.mul(&hi).round(work as u32, true);
    }
    Some(if upward { hi.round(prec, true) } else { lo.round(prec, false) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn rounding_is_directed() {
        let third = ratio(1, 3);
        let lo = round_dyadic(&third, 20, false);
        let hi = round_dyadic(&third, 20, true);
        assert!(lo < third && third < hi);
        assert!(&hi - &lo < ratio(1, 1 << 19));
        assert_eq!(round_dyadic(&rat(5), 64, false), rat(5));
    }

    #[test]
    fn exp_of_one_brackets_e() {
        let lo = exp_bound(&rat(1), 64, false).unwrap();
        let hi = exp_bound(&rat(1), 64, true).unwrap();
        let e_lo = Rat::from_float(2.718281828459045).unwrap() - ratio(1, 1_000_000_000_000_000);
        let e_hi = Rat::from_float(2.718281828459045).unwrap() + ratio(1, 1_000_000_000_000_000);
        assert!(lo <= hi);
        assert!(lo > e_lo && hi < e_hi);
        assert!(&hi - &lo < ratio(1, 1 << 50));
    }

    #[test]
    fn exp_of_zero_is_tight() {
        let lo = exp_bound(&rat(0), 64, false).unwrap();
        let hi = exp_bound(&rat(0), 64, true).unwrap();
        assert!(lo <= rat(1) && rat(1) <= hi);
        assert!(&hi - &lo < ratio(1, 1 << 60));
        assert!(exp_bound(&rat(701), 64, true).is_none());
    }

    #[test]
    fn negative_and_large_arguments() {
        for x in [-20i64, -3, 5, 40] {
            let lo = exp_bound(&rat(x), 64, false).unwrap().to_f64().unwrap();
            let hi = exp_bound(&rat(x), 64, true).unwrap().to_f64().unwrap();
            let e = (x as f64).exp();
            assert!(lo <= e * (1.0 + 1e-15) && e * (1.0 - 1e-15) <= hi, "x = {x}");
            assert!((hi - lo) / e < 1e-15);
        }
    }

    #[test]
    fn interval_ops() {
        let a = RatInterval::new(rat(-1), rat(2));
        assert_eq!(a.powi(2, 64), RatInterval::new(rat(0), rat(4)));
        let b = a.mul(&RatInterval::point(rat(3)), 64);
        assert_eq!(b, RatInterval::new(rat(-3), rat(6)));
        assert!(a.contains_zero());
        let iv = RatInterval::point(ratio(1, 3)).to_interval();
        assert!(iv.lo < iv.hi && iv.contains(1.0 / 3.0) && iv.width() < 1e-15);
    }
}
