use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::summation::Neumaier;

/// Number type the Laurent recurrence can be evaluated over.
pub(crate) trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + Neg<Output = Self>
{
    type Acc: Accumulator<Self>;

    fn constant(x: f64) -> Self;
}

pub(crate) trait Accumulator<T> {
    fn start(compensated: bool) -> Self;
    fn add(&mut self, x: T);
    fn value(&self) -> T;
}

impl Accumulator<f64> for Neumaier {
    fn start(compensated: bool) -> Self {
        Neumaier::with_mode(compensated)
    }

    #[inline]
    fn add(&mut self, x: f64) {
        Neumaier::add(self, x)
    }

    #[inline]
    fn value(&self) -> f64 {
        Neumaier::value(self)
    }
}

impl Scalar for f64 {
    type Acc = Neumaier;

    #[inline]
    fn constant(x: f64) -> Self {
        x
    }
}

/// `value + slope·x` for a single unknown `x`.
///
/// Products keep only the part linear in `x`; the recurrence never
/// multiplies two quantities that both depend on the unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Affine {
    pub value: f64,
    pub slope: f64,
}

impl Affine {
    pub fn unknown() -> Self {
        Self { value: 0.0, slope: 1.0 }
    }
}

impl Add for Affine {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            slope: self.slope + rhs.slope,
        }
    }
}

impl Sub for Affine {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            value: self.value - rhs.value,
            slope: self.slope - rhs.slope,
        }
    }
}

impl Mul for Affine {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert!(
            self.slope == 0.0 || rhs.slope == 0.0,
            "quadratic term in the unknown"
        );
        Self {
            value: self.value * rhs.value,
            slope: self.value * rhs.slope + self.slope * rhs.value,
        }
    }
}

impl Mul<f64> for Affine {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            value: self.value * rhs,
            slope: self.slope * rhs,
        }
    }
}

impl Div<f64> for Affine {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        Self {
            value: self.value / rhs,
            slope: self.slope / rhs,
        }
    }
}

impl Neg for Affine {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: -self.value,
            slope: -self.slope,
        }
    }
}

pub(crate) struct AffineAcc {
    value: Neumaier,
    slope: Neumaier,
}

impl Accumulator<Affine> for AffineAcc {
    fn start(compensated: bool) -> Self {
        Self {
            value: Neumaier::with_mode(compensated),
            slope: Neumaier::with_mode(compensated),
        }
    }

    #[inline]
    fn add(&mut self, x: Affine) {
        self.value.add(x.value);
        self.slope.add(x.slope);
    }

    fn value(&self) -> Affine {
        Affine {
            value: self.value.value(),
            slope: self.slope.value(),
        }
    }
}

impl Scalar for Affine {
    type Acc = AffineAcc;

    #[inline]
    fn constant(x: f64) -> Self {
        Self { value: x, slope: 0.0 }
    }
}

/// A value together with the sum of magnitudes of everything that went
/// into it, a first-order bound on the rounding error it carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Bounded {
    pub value: f64,
    pub magnitude: f64,
}

impl Bounded {
    pub fn exact(x: f64) -> Self {
        Self { value: x, magnitude: x.abs() }
    }
}

impl Add for Bounded {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            magnitude: self.magnitude + rhs.magnitude,
        }
    }
}

impl Sub for Bounded {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            value: self.value - rhs.value,
            magnitude: self.magnitude + rhs.magnitude,
        }
    }
}

impl Mul for Bounded {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            value: self.value * rhs.value,
            magnitude: self.magnitude * rhs.magnitude,
        }
    }
}

impl Mul<f64> for Bounded {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            value: self.value * rhs,
            magnitude: self.magnitude * rhs.abs(),
        }
    }
}

impl Div<f64> for Bounded {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        Self {
            value: self.value / rhs,
            magnitude: self.magnitude / rhs.abs(),
        }
    }
}

impl Neg for Bounded {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: -self.value,
            magnitude: self.magnitude,
        }
    }
}

pub(crate) struct BoundedAcc {
    value: Neumaier,
    magnitude: f64,
}

impl Accumulator<Bounded> for BoundedAcc {
    fn start(compensated: bool) -> Self {
        Self {
            value: Neumaier::with_mode(compensated),
            magnitude: 0.0,
        }
    }

    #[inline]
    fn add(&mut self, x: Bounded) {
        self.value.add(x.value);
        self.magnitude += x.magnitude;
    }

    fn value(&self) -> Bounded {
        Bounded {
            value: self.value.value(),
            magnitude: self.magnitude,
        }
    }
}

impl Scalar for Bounded {
    type Acc = BoundedAcc;

    #[inline]
    fn constant(x: f64) -> Self {
        Self::exact(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_arithmetic_is_linear() {
        let x = Affine::unknown();
        let c = Affine::constant(3.0);
        let y = (c * x + Affine::constant(2.0)) * 0.5 - (-x) / 2.0;
        assert_eq!(y, Affine { value: 1.0, slope: 2.0 });
    }

    #[test]
    fn accumulator_sums_both_parts() {
        let mut acc = AffineAcc::start(true);
        acc.add(Affine { value: 1e100, slope: 1.0 });
        acc.add(Affine { value: 1.0, slope: 1e100 });
        acc.add(Affine { value: -1e100, slope: -1e100 });
        assert_eq!(acc.value(), Affine { value: 1.0, slope: 1.0 });
    }

    #[test]
    fn bounded_tracks_cancellation() {
        let x = Bounded::exact(1e8) * Bounded::exact(2.0) - Bounded::exact(2e8) + Bounded::exact(-1.0) / 2.0;
        assert_eq!(x.value, -0.5);
        assert_eq!(x.magnitude, 4e8 + 0.5);
    }
}
