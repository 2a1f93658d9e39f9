//! Vector and scalar interactions with Coulomb-like behaviour at the origin.
//!
//! Each component is stored twice: as a closed-form radial function (used
//! by the shooting oracle) and as the coefficients of
//!
//! ```text
//! V(r) = (1/r) Σ V_i r^i,    W(r) = (1/r) Σ W_i r^i
//! ```
//!
//! (used by the recursion engine). Coefficients keep their true signs, so an
//! attractive Coulomb tail has `V_0 < 0`.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    /// `-a/r`
    Coulomb,
    /// `-(a/r) exp(-λ r)`
    Yukawa,
    /// `(1/r) Σ_{i≤K} c_i r^i`, the listed coefficients and nothing else.
    CustomSeries,
}

/// One Lorentz component of the interaction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    kind: ComponentKind,
    strength: f64,
    screen: f64,
    coeffs: Vec<f64>,
}

impl Component {
    fn coulomb(strength: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = -strength;
        Self {
            kind: ComponentKind::Coulomb,
            strength,
            screen: 0.0,
            coeffs,
        }
    }

    fn yukawa(strength: f64, screen: f64, order: usize) -> Self {
        // -a (-λ)^i / i!
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = -strength;
        coeffs.push(term);
        for i in 1..=order {
            term *= -screen / i as f64;
            coeffs.push(term);
        }
        Self {
            kind: ComponentKind::Yukawa,
            strength,
            screen,
            coeffs,
        }
    }

    fn series(coeffs: Vec<f64>) -> Self {
        Self {
            kind: ComponentKind::CustomSeries,
            strength: -coeffs[0],
            screen: 0.0,
            coeffs,
        }
    }

    pub fn kind(&self) -> ComponentKind {
        self.kind
    }

    /// Positive strength `a` of an attractive component (`-V_0`).
    pub fn strength(&self) -> f64 {
        self.strength
    }

    /// Inverse screening length (zero for Coulomb and custom series).
    pub fn screen(&self) -> f64 {
        self.screen
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `r^{i-1}`. Indices past the stored table are zero for
    /// Coulomb and custom components, whose expansions terminate.
    #[inline]
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// Limit of `r·V(r)` at the origin.
    pub fn origin_coeff(&self) -> f64 {
        self.coeffs[0]
    }

    /// Closed-form value at radius `r > 0`.
    pub fn eval(&self, r: f64) -> f64 {
        match self.kind {
            ComponentKind::Coulomb => -self.strength / r,
            ComponentKind::Yukawa => -self.strength * (-self.screen * r).exp() / r,
            ComponentKind::CustomSeries => {
                // Horner on Σ c_i r^i, then divide by r
                let poly = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c);
                poly / r
            }
        }
    }

    fn is_terminating(&self) -> bool {
        !matches!(self.kind, ComponentKind::Yukawa)
    }

    fn scaled(&self, sigma: f64) -> Self {
        let mut factor = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * factor;
                factor *= sigma;
                out
            })
            .collect();
        Self {
            kind: self.kind,
            strength: self.strength,
            screen: self.screen * sigma,
            coeffs,
        }
    }
}

/// Vector plus scalar interaction, immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSpec {
    vector: Component,
    scalar: Component,
    order: usize,
}

impl PotentialSpec {
    pub fn vector(&self) -> &Component {
        &self.vector
    }

    pub fn scalar(&self) -> &Component {
        &self.scalar
    }

    pub fn vector_coeffs(&self) -> &[f64] {
        self.vector.coeffs()
    }

    pub fn scalar_coeffs(&self) -> &[f64] {
        self.scalar.coeffs()
    }

    /// Highest stored coefficient index `K`.
    pub fn truncation_order(&self) -> usize {
        self.order
    }

    /// `V_i`, zero for negative `i`.
    #[inline]
    pub fn v(&self, i: isize) -> f64 {
        if i < 0 {
            0.0
        } else {
            self.vector.coeff(i as usize)
        }
    }

    /// `W_i`, zero for negative `i`.
    #[inline]
    pub fn w(&self, i: isize) -> f64 {
        if i < 0 {
            0.0
        } else {
            self.scalar.coeff(i as usize)
        }
    }

    pub fn vector_potential(&self, r: f64) -> f64 {
        self.vector.eval(r)
    }

    pub fn scalar_potential(&self, r: f64) -> f64 {
        self.scalar.eval(r)
    }

    /// Whether the coefficients needed for the correction of order `k` are
    /// known. Terminating expansions are known to every order; a Yukawa
    /// table only to its truncation order.
    pub fn supports_order(&self, k: usize) -> bool {
        k <= self.order || (self.vector.is_terminating() && self.scalar.is_terminating())
    }

    /// The same interaction in units rescaled by `sigma`: `V_i → σ^i V_i`,
    /// `W_i → σ^i W_i`, screens `→ σ·screen`.
    pub fn scaled(&self, sigma: f64) -> Self {
        Self {
            vector: self.vector.scaled(sigma),
            scalar: self.scalar.scaled(sigma),
            order: self.order,
        }
    }
}

fn check_coupling(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidArgument(format!("{name} must be finite, got {value}")));
    }
    if value < 0.0 {
        return Err(Error::InvalidArgument(format!("{name} must be non-negative, got {value}")));
    }
    Ok(())
}

/// Attractive Yukawa vector and scalar components,
/// `V = -(a_v/r) e^{-λ r}`, `W = -(a_s/r) e^{-μ r}`, expanded through `r^{K-1}`.
pub fn yukawa_spec(a_v: f64, lambda: f64, a_s: f64, mu: f64, order: usize) -> Result<PotentialSpec> {
    check_coupling("vector strength", a_v)?;
    check_coupling("vector screen", lambda)?;
    check_coupling("scalar strength", a_s)?;
    check_coupling("scalar screen", mu)?;
    Ok(PotentialSpec {
        vector: Component::yukawa(a_v, lambda, order),
        scalar: Component::yukawa(a_s, mu, order),
        order,
    })
}

/// Unscreened Coulomb components `-a_v/r` and `-a_s/r`.
pub fn coulomb_spec(a_v: f64, a_s: f64, order: usize) -> Result<PotentialSpec> {
    check_coupling("vector strength", a_v)?;
    check_coupling("scalar strength", a_s)?;
    Ok(PotentialSpec {
        vector: Component::coulomb(a_v, order),
        scalar: Component::coulomb(a_s, order),
        order,
    })
}

/// Explicit coefficient lists, taken verbatim.
pub fn custom_spec(vector: &[f64], scalar: &[f64]) -> Result<PotentialSpec> {
    if vector.is_empty() || scalar.is_empty() {
        return Err(Error::InvalidArgument("coefficient lists must be non-empty".into()));
    }
    if vector.len() != scalar.len() {
        return Err(Error::InvalidArgument(format!(
            "coefficient lists differ in length: {} vector vs {} scalar",
            vector.len(),
            scalar.len()
        )));
    }
    if let Some(bad) = vector.iter().chain(scalar).find(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite coefficient {bad}")));
    }
    Ok(PotentialSpec {
        vector: Component::series(vector.to_vec()),
        scalar: Component::series(scalar.to_vec()),
        order: vector.len() - 1,
    })
}
