//! Partial sums of the (divergent) correction series and the bracketed
//! estimate taken where the even and odd subsequences come closest.

use serde::Serialize;

use crate::engine::EnergySeries;
use crate::summation::Neumaier;
use crate::{Error, Result};

/// Binding energies `B[k] = m - Σ_{j≤k} E_j`, split by parity of `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumSequence {
    pub binding_sums: Vec<f64>,
    pub even: Vec<usize>,
    pub odd: Vec<usize>,
}

impl SumSequence {
    pub fn from_binding_sums(binding_sums: Vec<f64>) -> Self {
        let even = (0..binding_sums.len()).step_by(2).collect();
        let odd = (1..binding_sums.len()).step_by(2).collect();
        Self {
            binding_sums,
            even,
            odd,
        }
    }

    pub fn len(&self) -> usize {
        self.binding_sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.binding_sums.is_empty()
    }

    /// Even-indexed sums strictly decrease and odd-indexed sums strictly
    /// increase from `k = 2` on (the orientation seen for attractive
    /// screening).
    pub fn brackets_from_above(&self) -> bool {
        self.monotone(|prev, next| next < prev, |prev, next| next > prev)
    }

    /// The mirrored orientation: even sums increase, odd sums decrease.
    pub fn brackets_from_below(&self) -> bool {
        self.monotone(|prev, next| next > prev, |prev, next| next < prev)
    }

    fn monotone(&self, even_ok: impl Fn(f64, f64) -> bool, odd_ok: impl Fn(f64, f64) -> bool) -> bool {
        let b = &self.binding_sums;
        let check = |indices: &[usize], ok: &dyn Fn(f64, f64) -> bool| {
            let tail: Vec<f64> = indices.iter().filter(|&&k| k >= 2).map(|&k| b[k]).collect();
            tail.windows(2).all(|w| ok(w[0], w[1]))
        };
        check(&self.even, &even_ok) && check(&self.odd, &odd_ok)
    }
}

/// Average of two consecutive partial sums at their closest approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub estimate: f64,
    pub gap: f64,
    pub k_star: usize,
    /// Whether the parity subsequences are monotone, i.e. actually bracket.
    pub bracketing: bool,
}

pub fn partial_sums(series: &EnergySeries) -> Result<SumSequence> {
    if series.corrections().is_empty() {
        return Err(Error::InvalidArgument("empty series".into()));
    }
    let m = series.mass();
    let mut acc = Neumaier::new();
    let sums = series
        .corrections()
        .iter()
        .map(|&e| {
            acc.add(e);
            m - acc.value()
        })
        .collect();
    Ok(SumSequence::from_binding_sums(sums))
}

/// Closest approach of consecutive sums, `k* = argmin_{k≥2} |B[k] - B[k-1]|`
/// (the last index wins ties), with `estimate = (B[k*] + B[k*-1]) / 2`.
///
/// Another reasonable reading compares the last elements of the two parity
/// subsequences; on monotone bracketing sequences both pick the tail.
pub fn bracket_estimate(seq: &SumSequence) -> Result<Bracket> {
    let b = &seq.binding_sums;
    if b.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "bracketing needs at least four partial sums, got {}",
            b.len()
        )));
    }
    let mut k_star = 2;
    let mut gap = f64::INFINITY;
    for k in 2..b.len() {
        let d = (b[k] - b[k - 1]).abs();
        if d <= gap {
            gap = d;
            k_star = k;
        }
    }
    Ok(Bracket {
        estimate: 0.5 * (b[k_star] + b[k_star - 1]),
        gap,
        k_star,
        bracketing: seq.brackets_from_above() || seq.brackets_from_below(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::make_state;
    use approx::assert_relative_eq;

    fn series(corrections: Vec<f64>) -> EnergySeries {
        EnergySeries::new(corrections, 1.0, make_state(-1, 0, 1).unwrap())
    }

    #[test]
    fn coulomb_sums_are_constant() {
        let seq = partial_sums(&series(vec![0.97, 0.0, 0.0, 0.0, 0.0])).unwrap();
        for b in &seq.binding_sums {
            assert_relative_eq!(*b, 0.03, max_relative = 1e-13);
        }
        let br = bracket_estimate(&seq).unwrap();
        assert_eq!(br.gap, 0.0);
        assert_eq!(br.k_star, 4);
        assert_relative_eq!(br.estimate, seq.binding_sums[4]);
    }

    #[test]
    fn single_term() {
        let seq = partial_sums(&series(vec![0.9])).unwrap();
        assert_eq!(seq.binding_sums.len(), 1);
        assert_relative_eq!(seq.binding_sums[0], 0.1, max_relative = 1e-15);
        assert_eq!(seq.even, vec![0]);
        assert!(seq.odd.is_empty());
        assert!(bracket_estimate(&seq).is_err());
    }

    #[test]
    fn empty_series_is_rejected() {
        assert!(partial_sums(&series(vec![])).is_err());
    }

    #[test]
    fn alternating_toy_sequence() {
        let seq = SumSequence::from_binding_sums(vec![2.0, 0.0, 1.2, 0.8, 1.05, 0.95]);
        let br = bracket_estimate(&seq).unwrap();
        assert_eq!(br.k_star, 5);
        assert_relative_eq!(br.estimate, 1.0, max_relative = 1e-15);
        assert_relative_eq!(br.gap, 0.1, max_relative = 1e-12);
        assert!(br.bracketing);
        assert!(seq.brackets_from_above());
        assert!(!seq.brackets_from_below());
    }

    #[test]
    fn printed_vector_column_tail() {
        // rows 10..15 of the s=+1 pure-vector column, keV
        let seq = SumSequence::from_binding_sums(vec![
            12.297834, 12.297465, 12.297704, 12.297544, 12.297654, 12.297576,
        ]);
        let br = bracket_estimate(&seq).unwrap();
        assert_eq!(br.k_star, 5);
        assert!(br.bracketing);
        assert_relative_eq!(br.estimate, 12.297615, epsilon = 1e-9);
        assert!((br.estimate - 12.297609).abs() < br.gap);
    }

    #[test]
    fn non_monotone_sequence_is_flagged() {
        let seq = SumSequence::from_binding_sums(vec![1.0, 0.5, 0.9, 0.6, 0.95, 0.55, 0.92, 0.58]);
        let br = bracket_estimate(&seq).unwrap();
        assert!(!br.bracketing);
    }

    #[test]
    fn shift_invariance() {
        let base = vec![2.0, 0.0, 1.2, 0.8, 1.05, 0.95];
        let a = bracket_estimate(&SumSequence::from_binding_sums(base.clone())).unwrap();
        let b = bracket_estimate(&SumSequence::from_binding_sums(base.iter().map(|x| x + 7.5).collect())).unwrap();
        assert_eq!(a.k_star, b.k_star);
        assert_relative_eq!(b.estimate, a.estimate + 7.5, max_relative = 1e-15);
    }
}
