use thiserror::Error;

/// Errors raised by the physics layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The Coulomb coupling at the origin is too strong for the
    /// point-Coulomb bound-state formulas.
    #[error("supercritical coupling: {0}")]
    Supercritical(String),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// The quantization condition does not depend on the unknown correction.
    #[error("degenerate quantization condition at order {order}")]
    DegenerateQuantization { order: usize },

    #[error("internal consistency failure at order {order}: {what} residual {residual:e}")]
    InternalConsistency {
        order: usize,
        what: &'static str,
        residual: f64,
    },

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("wrong state: level {expected} of this symmetry requested, {found} found in the search window")]
    WrongState { expected: usize, found: usize },

    #[error("integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
