//! Compensated summation.
//!
//! The Laurent recursions are dominated by double convolutions whose terms
//! cancel more and more strongly as the order grows. [`Neumaier`] keeps a
//! running error term so that the accumulated sum is accurate to a few ulps
//! of the result instead of a few ulps of the largest addend.

/// Neumaier's variant of Kahan summation.
///
/// With `compensated == false` it degrades to a plain running sum, which is
/// only useful for measuring what the compensation buys.
#[derive(Debug, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    compensation: f64,
    compensated: bool,
}

impl Default for Neumaier {
    fn default() -> Self {
        Self::new()
    }
}

impl Neumaier {
    pub fn new() -> Self {
        Self::with_mode(true)
    }

    pub fn with_mode(compensated: bool) -> Self {
        Self {
            sum: 0.0,
            compensation: 0.0,
            compensated,
        }
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.compensated {
            if self.sum.abs() >= value.abs() {
                self.compensation += (self.sum - t) + value;
            } else {
                self.compensation += (value - t) + self.sum;
            }
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for Neumaier {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// Compensated sum of an iterator.
pub fn sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<Neumaier>().value()
}
