//! Accumulation helpers.
//!
//! Long sums of mixed-sign terms show up in the Mellin moments (millions of
//! breakpoints) and in the contour transforms. Everything here is
//! order-deterministic: parallel callers split work into fixed chunks and
//! merge the partial accumulators in chunk order.

use std::ops::{Add, AddAssign};

use crate::ComplexScalar;

/// Neumaier compensated accumulator for `f64`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in, keeping both compensation terms.
    #[inline]
    pub fn merge(&mut self, other: &Compensated) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for Compensated {
    fn add_assign(&mut self, v: f64) {
        self.add(v);
    }
}

/// Neumaier summation over an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = Compensated::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Component-wise Neumaier accumulator for complex values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexCompensated {
    re: Compensated,
    im: Compensated,
}

impl ComplexCompensated {
    pub const fn new() -> Self {
        Self {
            re: Compensated::new(),
            im: Compensated::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, v: ComplexScalar) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    #[inline]
    pub fn merge(&mut self, other: &ComplexCompensated) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    #[inline]
    pub fn value(&self) -> ComplexScalar {
        ComplexScalar::new(self.re.value(), self.im.value())
    }
}

impl AddAssign<ComplexScalar> for ComplexCompensated {
    fn add_assign(&mut self, v: ComplexScalar) {
        self.add(v);
    }
}

/// Unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn from_f64(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    /// Exact product of two doubles.
    pub fn from_product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = fast_two_sum(s, e + self.lo);
        Self { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for DoubleDouble {
    type Output = DoubleDouble;

    fn add(self, b: DoubleDouble) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, b: DoubleDouble) {
        *self = *self + b;
    }
}

/// Double-double accumulator for sums of complex products `a * b`, where
/// each partial product is formed exactly before it is added.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexDoubleDouble {
    re: DoubleDouble,
    im: DoubleDouble,
}

impl ComplexDoubleDouble {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add_product(&mut self, a: ComplexScalar, b: ComplexScalar) {
        self.re += DoubleDouble::from_product(a.re, b.re);
        self.re += DoubleDouble::from_product(-a.im, b.im);
        self.im += DoubleDouble::from_product(a.re, b.im);
        self.im += DoubleDouble::from_product(a.im, b.re);
    }

    pub fn value(&self) -> ComplexScalar {
        ComplexScalar::new(self.re.to_f64(), self.im.to_f64())
    }
}
