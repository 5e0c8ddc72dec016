//! Error-free transformations, double-double arithmetic and tail bounds
//! shared by the series evaluators.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub(crate) const EPS: f64 = f64::EPSILON;
/// Unit roundoff of double-double arithmetic (about 2^-104).
pub(crate) const DD_EPS: f64 = 4.93e-32;

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum `hi + lo` with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, f) = two_sum(self.hi, -p);
        let f = f - e + self.lo;
        let q2 = (s + f) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: f64) -> Dd {
        self + Dd::from_f64(b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + q3
    }
}

/// Neumaier-compensated running sum that also tracks Σ|x| for rounding
/// bounds.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Σ|x| over everything added so far.
    #[inline]
    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// Bound on the accumulation error of [`value`](Self::value).
    pub fn rounding_bound(&self) -> f64 {
        EPS * self.value().abs() + 2.0 * EPS * EPS * self.abs_sum
    }
}

/// Encloses Σ_{k>n} c_k k^{-p} given 0 ≤ lo ≤ c_k ≤ hi for all k > n.
///
/// k^{-p} is convex, so the trapezoid rule gives the lower side and the
/// midpoint rule the upper side. Returns (lower, upper).
pub(crate) fn power_tail_bracket(n: usize, p: f64, lo: f64, hi: f64) -> (f64, f64) {
    debug_assert!(p > 1.0 && n >= 1 && lo >= 0.0 && hi >= lo);
    let nf = n as f64;
    let first = (nf + 1.0).powf(-p);
    let lower_sum = (nf + 1.0) * first / (p - 1.0) + 0.5 * first;
    let upper_sum = (nf + 0.5).powf(1.0 - p) / (p - 1.0);
    let lower = lo * lower_sum;
    let upper = hi * upper_sum;
    // pad against rounding in the powf/divisions
    let pad = 8.0 * EPS * (lower + upper);
    ((lower - pad).max(0.0), upper + pad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_lost_bits() {
        let a = Dd::from_f64(1.0) + Dd::from_f64(1e-20);
        let b = a - Dd::from_f64(1.0);
        assert_eq!(b.to_f64(), 1e-20);
    }

    #[test]
    fn dd_division_is_accurate() {
        let third = Dd::ONE / Dd::from_f64(3.0);
        let back = third.mul_f64(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let q = Dd::from_f64(10.0).div_f64(7.0).mul_f64(7.0) - Dd::from_f64(10.0);
        assert!(q.to_f64().abs() < 1e-30);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn power_tail_bracket_contains_zeta_tail() {
        // Σ_{k>10} k^{-3} = ζ(3) - H_10^{(3)}
        let head: f64 = (1..=10).map(|k| (k as f64).powi(-3)).sum();
        let tail = 1.202_056_903_159_594_3 - head;
        let (lo, hi) = power_tail_bracket(10, 3.0, 1.0, 1.0);
        assert!(lo <= tail && tail <= hi, "{lo} {tail} {hi}");
        assert!(hi - lo < 1e-2 * tail);
    }
}
