//! Logarithmic perturbation theory for a Dirac particle bound in a central
//! field made of a Lorentz-vector and a Lorentz-scalar screened Coulomb
//! interaction.
//!
//! The crate computes the energy corrections `E_0, E_1, …, E_K` of the
//! semiclassical ħ-expansion from triangular Laurent-coefficient recursions
//! and a residue quantization condition, and checks them against printed
//! closed forms and a direct shooting solution of the radial Dirac system.
//!
//! Units are natural (ħ = c = 1). The engine works with an arbitrary
//! positive mass `m`; a potential coefficient `V_i` carries units of
//! `energy^i`.
//!
//! ```
//! use dirac_lpt::{engine, potentials, states};
//!
//! let spec = potentials::yukawa_spec(0.54, 0.0346, 0.0, 0.0, 6).unwrap();
//! let state = states::make_state(-1, 0, 1).unwrap();
//! let series = engine::energy_series(&spec, &state, 1.0, 6).unwrap();
//! assert_eq!(series.corrections().len(), 7);
//! ```

pub mod analysis;
pub mod cli;
pub mod closed_forms;
pub mod engine;
mod error;
pub mod ode;
pub mod oracle;
pub mod potentials;
pub mod states;
pub mod summation;

pub use error::{Error, Result};
