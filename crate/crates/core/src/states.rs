//! Discrete quantum numbers of a central-field Dirac level.

use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// `s = sign(χ)`, orbital `l`, radial quantum number `n_r`.
///
/// `j = l - s/2` and `χ = s (j + 1/2)`, so `χ = l` for `s = +1` and
/// `χ = -(l + 1)` for `s = -1`. For `s = +1` the radial quantum number
/// starts at one: `n_r = n + (s + 1)/2` where `n` counts the nodes of the
/// large component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuantumNumbers {
    s: i32,
    l: u32,
    n_r: u32,
}

impl QuantumNumbers {
    pub fn s(&self) -> i32 {
        self.s
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn n_r(&self) -> u32 {
        self.n_r
    }

    pub fn chi(&self) -> i32 {
        if self.s > 0 {
            self.l as i32
        } else {
            -(self.l as i32 + 1)
        }
    }

    /// Total angular momentum `j`.
    pub fn j(&self) -> f64 {
        self.l as f64 - 0.5 * self.s as f64
    }

    /// Position of the level among those sharing `χ`, deepest first,
    /// `n_r - (s+1)/2` (for `χ > 0` the lowest level has `n_r = 1`). In a
    /// pure vector field this is also the node count of `G`.
    pub fn level_index(&self) -> u32 {
        self.n_r - ((self.s + 1) / 2) as u32
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s={:+}, n_r={}, l={} (j={}/2, chi={:+})",
            self.s,
            self.n_r,
            self.l,
            2 * self.l as i32 - self.s,
            self.chi()
        )
    }
}

pub fn make_state(s: i32, l: u32, n_r: u32) -> Result<QuantumNumbers> {
    if s != 1 && s != -1 {
        return Err(Error::InvalidArgument(format!("s must be +1 or -1, got {s}")));
    }
    if s == 1 && l == 0 {
        return Err(Error::InvalidState("s=+1 requires l >= 1".into()));
    }
    if s == 1 && n_r == 0 {
        return Err(Error::InvalidState("s=+1 requires n_r >= 1".into()));
    }
    Ok(QuantumNumbers { s, l, n_r })
}

/// `γ = sqrt(χ² + W_0² - V_0²)`, the power of `r` in the regular solution
/// at the origin.
pub fn frobenius_index(chi: i32, v0: f64, w0: f64) -> Result<f64> {
    let chi = chi as f64;
    let disc = chi * chi + w0 * w0 - v0 * v0;
    if !(disc > 0.0) {
        return Err(Error::Supercritical(format!(
            "chi^2 + W0^2 - V0^2 = {disc:e} is not positive"
        )));
    }
    Ok(disc.sqrt())
}

/// Quantization count `N = n_r + sqrt(χ² + W_0² - V_0²)`.
pub fn principal_n(q: &QuantumNumbers, v0: f64, w0: f64) -> Result<f64> {
    Ok(q.n_r as f64 + frobenius_index(q.chi(), v0, w0)?)
}
