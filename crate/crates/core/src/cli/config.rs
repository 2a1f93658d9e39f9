use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::potentials::{coulomb_spec, custom_spec, yukawa_spec, PotentialSpec};
use crate::states::{make_state, QuantumNumbers};

pub const MAX_ORDER: usize = 64;
pub const DEFAULT_MASS_KEV: f64 = 511.0034;
pub const DEFAULT_ALPHA: f64 = 1.0 / 137.036;
pub const DEFAULT_SCREEN_COEFFICIENT: f64 = 1.13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mass {
    pub value: f64,
    #[serde(default = "default_unit")]
    pub unit: String,
}

impl Default for Mass {
    fn default() -> Self {
        Self {
            value: DEFAULT_MASS_KEV,
            unit: default_unit(),
        }
    }
}

fn default_unit() -> String {
    "keV".into()
}

/// Strengths are dimensionless, screens and series coefficients are in
/// units of the mass (`V_i` in units of `m^i`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialConfig {
    /// Each component carries a share of the nuclear charge, `z_c = share·z`,
    /// with strength `α z_c` and screen `c α z_c^{1/3}`.
    ChargeRecipe {
        vector_share: f64,
        scalar_share: f64,
        #[serde(default = "default_screen_coefficient")]
        screen_coefficient: f64,
        #[serde(default = "default_true")]
        screened: bool,
    },
    Yukawa {
        vector_strength: f64,
        vector_screen: f64,
        #[serde(default)]
        scalar_strength: f64,
        #[serde(default)]
        scalar_screen: f64,
    },
    Coulomb {
        vector_strength: f64,
        #[serde(default)]
        scalar_strength: f64,
    },
    CustomSeries { vector: Vec<f64>, scalar: Vec<f64> },
}

fn default_screen_coefficient() -> f64 {
    DEFAULT_SCREEN_COEFFICIENT
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub s: i32,
    pub l: u32,
    pub n_r: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mass: Mass,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_z")]
    pub z: u32,
    pub potential: PotentialConfig,
    pub state: StateConfig,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_oracle_tol")]
    pub oracle_tol: f64,
    /// Also run the shooting solver in `series`.
    #[serde(default)]
    pub oracle: bool,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_z() -> u32 {
    74
}

fn default_order() -> usize {
    15
}

fn default_oracle_tol() -> f64 {
    1e-12
}

/// Everything a run needs, in units of the mass.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub spec: PotentialSpec,
    pub state: QuantumNumbers,
    pub mass: f64,
    pub order: usize,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("at `{path}`: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let bad = |field: &str, msg: String| CliError::Config(format!("at `{field}`: {msg}"));
        if !(self.mass.value.is_finite() && self.mass.value > 0.0) {
            return Err(bad("mass.value", format!("must be positive, got {}", self.mass.value)));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(bad("alpha", format!("must be positive, got {}", self.alpha)));
        }
        if self.order > MAX_ORDER {
            return Err(bad("order", format!("at most {MAX_ORDER}, got {}", self.order)));
        }
        if !(self.oracle_tol.is_finite() && self.oracle_tol > 0.0) {
            return Err(bad("oracle_tol", format!("must be positive, got {}", self.oracle_tol)));
        }
        let state = make_state(self.state.s, self.state.l, self.state.n_r).map_err(|e| bad("state", e.to_string()))?;
        let order = self.order;
        let spec = match &self.potential {
            PotentialConfig::ChargeRecipe {
                vector_share,
                scalar_share,
                screen_coefficient,
                screened,
            } => {
                for (name, share) in [("vector_share", vector_share), ("scalar_share", scalar_share)] {
                    if !(share.is_finite() && *share >= 0.0) {
                        return Err(bad(&format!("potential.{name}"), format!("must be non-negative, got {share}")));
                    }
                }
                let recipe = |share: f64| {
                    let zc = share * f64::from(self.z);
                    let screen = if *screened { screen_coefficient * self.alpha * zc.cbrt() } else { 0.0 };
                    (self.alpha * zc, screen)
                };
                let (a_v, lambda) = recipe(*vector_share);
                let (a_s, mu) = recipe(*scalar_share);
                yukawa_spec(a_v, lambda, a_s, mu, order)
            }
            PotentialConfig::Yukawa {
                vector_strength,
                vector_screen,
                scalar_strength,
                scalar_screen,
            } => yukawa_spec(*vector_strength, *vector_screen, *scalar_strength, *scalar_screen, order),
            PotentialConfig::Coulomb {
                vector_strength,
                scalar_strength,
            } => coulomb_spec(*vector_strength, *scalar_strength, order),
            PotentialConfig::CustomSeries { vector, scalar } => custom_spec(vector, scalar),
        }
        .map_err(|e| bad("potential", e.to_string()))?;
        Ok(Resolved {
            spec,
            state,
            mass: self.mass.value,
            order,
        })
    }
}
