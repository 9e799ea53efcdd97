//! Outward-rounded `f64` intervals and boxes.
//!
//! Every arithmetic result is widened by one ulp on each side, which covers the
//! half-ulp error of IEEE round-to-nearest. `exp` is widened by four ulps since
//! the platform `exp` is not correctly rounded.

use serde::{Deserialize, Serialize};

/// Inflation applied to `exp` results, in ulps.
pub const EXP_INFLATION_ULPS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl Interval {
    /// Panics unless `lo <= hi`.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn entire() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    /// Outward-rounded result; NaN endpoints become the entire line.
    fn outward(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Interval::entire();
        }
        Interval { lo: down(lo), hi: up(hi) }
    }

    pub fn is_entire(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            self.lo + (self.hi - self.lo) / 2.0
        } else if self.lo.is_finite() {
            self.lo.max(0.0) + 1.0
        } else if self.hi.is_finite() {
            self.hi.min(0.0) - 1.0
        } else {
            0.0
        }
    }

    /// Largest absolute value.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// `self` lies in the open interior of `other`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Splits at `lo + ratio * width`.
    pub fn split_at_ratio(&self, ratio: f64) -> (Interval, Interval) {
        let m = self.lo + ratio * (self.hi - self.lo);
        let m = m.clamp(self.lo, self.hi);
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::outward(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::outward(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        if (self.lo == 0.0 && self.hi == 0.0) || (o.lo == 0.0 && o.hi == 0.0) {
            return Interval::point(0.0);
        }
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        if p.iter().any(|v| v.is_nan()) {
            return Interval::entire();
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::outward(lo, hi)
    }

    /// Division by an interval that excludes zero; `None` otherwise.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let p = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        if p.iter().any(|v| v.is_nan()) {
            return Some(Interval::entire());
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Interval::outward(lo, hi))
    }

    pub fn scale(&self, c: f64) -> Interval {
        self.mul(&Interval::point(c))
    }

    pub fn sqr(&self) -> Interval {
        let a = self.mig();
        let b = self.mag();
        Interval::outward(a * a, b * b).max_zero()
    }

    fn max_zero(self) -> Interval {
        Interval {
            lo: self.lo.max(0.0),
            hi: self.hi,
        }
    }

    pub fn powi(&self, k: u32) -> Interval {
        match k {
            0 => Interval::point(1.0),
            1 => *self,
            _ if k.is_multiple_of(2) => {
                let h = self.sqr();
                h.powi_nonneg(k / 2)
            }
            _ => {
                // odd powers are monotone
                let lo = pow_round(self.lo, k, false);
                let hi = pow_round(self.hi, k, true);
                Interval { lo, hi }
            }
        }
    }

    fn powi_nonneg(&self, k: u32) -> Interval {
        let lo = pow_round(self.lo, k, false).max(0.0);
        let hi = pow_round(self.hi, k, true);
        Interval { lo, hi }
    }

    pub fn exp(&self) -> Interval {
        let widen = |mut x: f64, upward: bool| {
            for _ in 0..EXP_INFLATION_ULPS {
                x = if upward { up(x) } else { down(x) };
            }
            x
        };
        let lo = widen(self.lo.exp(), false).max(0.0);
        let hi = widen(self.hi.exp(), true);
        if lo.is_nan() || hi.is_nan() {
            return Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            };
        }
        Interval { lo, hi }
    }
}

/// `x^k` rounded in the requested direction by repeated outward multiplication.
fn pow_round(x: f64, k: u32, upward: bool) -> f64 {
    let mut acc = Interval::point(1.0);
    let base = Interval::point(x);
    for _ in 0..k {
        acc = acc.mul(&base);
    }
    if upward {
        acc.hi
    } else {
        acc.lo
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

/// Axis-aligned box, one interval per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalBox(pub Vec<Interval>);

impl IntervalBox {
    pub fn new(sides: Vec<Interval>) -> Self {
        IntervalBox(sides)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sides(&self) -> &[Interval] {
        &self.0
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(Interval::mid).collect()
    }

    pub fn max_width(&self) -> f64 {
        self.0.iter().map(Interval::width).fold(0.0, f64::max)
    }

    pub fn subset_of(&self, other: &IntervalBox) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.subset_of(b))
    }

    /// Splits every side in halves, giving `2^dim` children in lexicographic order.
    pub fn bisect_all(&self) -> Vec<IntervalBox> {
        let mut out = vec![Vec::new()];
        for side in &self.0 {
            let (a, b) = side.split_at_ratio(0.5);
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Interval>| {
                    let mut pa = prefix.clone();
                    pa.push(a);
                    let mut pb = prefix;
                    pb.push(b);
                    [pa, pb]
                })
                .collect();
        }
        out.into_iter().map(IntervalBox).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::new(0.1, 0.2);
        let b = Interval::new(-0.3, 0.4);
        let s = a.add(&b);
        assert!(s.contains(0.1 + -0.3) && s.contains(0.2 + 0.4));
        let p = a.mul(&b);
        assert!(p.contains(0.2 * -0.3) && p.contains(0.2 * 0.4));
        assert!(Interval::new(-2.0, 1.0).powi(2).lo == 0.0);
        assert!(Interval::new(-2.0, 1.0).powi(3).lo <= -8.0);
    }

    #[test]
    fn exp_enclosure() {
        let e = Interval::new(0.0, 1.0).exp();
        assert!(e.lo <= 1.0 && e.hi >= std::f64::consts::E);
        assert_eq!(Interval::new(800.0, 900.0).exp().hi, f64::INFINITY);
    }

    #[test]
    fn division() {
        assert!(Interval::new(1.0, 2.0).div(&Interval::new(-1.0, 1.0)).is_none());
        let q = Interval::new(1.0, 2.0).div(&Interval::new(2.0, 4.0)).unwrap();
        assert!(q.contains(0.25) && q.contains(1.0));
    }

    #[test]
    fn bisection_of_box() {
        let b = IntervalBox::new(vec![Interval::new(0.0, 1.0), Interval::new(0.0, 2.0)]);
        let kids = b.bisect_all();
        assert_eq!(kids.len(), 4);
        assert!(kids.iter().all(|k| k.subset_of(&b)));
        assert_eq!(kids[1].0[1], Interval::new(1.0, 2.0));
    }
}
