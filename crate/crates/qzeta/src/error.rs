use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by evaluators, growth checks, and the CLI layer.
#[derive(Debug, Clone, Error)]
pub enum QzetaError {
    /// A parameter violates a structural precondition (q outside (0,1),
    /// empty window, zero step, N = 0, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An evaluator was asked to work outside its domain of validity
    /// (e.g. direct summation with Re(t) <= 0).
    #[error("domain error: {0}")]
    Domain(String),

    /// The evaluation point is within the hard margin (1e-10) of the pole
    /// lattice. Carries the nearest lattice point and the measured margin.
    #[error("pole proximity: nearest lattice point {nearest} at margin {margin:.3e}")]
    PoleProximity { nearest: Complex64, margin: f64 },

    /// z is within 1e-12 of a non-positive integer, where Gamma has a pole.
    #[error("gamma pole: z = {z} is within 1e-12 of a non-positive integer")]
    GammaPole { z: Complex64 },

    /// classical_zeta evaluated within 1e-10 of the pole at s = 1.
    #[error("zeta pole: s = {s} is within 1e-10 of s = 1")]
    ZetaPole { s: Complex64 },

    /// The term budget ran out before the truncation tolerance was met.
    #[error("budget exhausted: {terms} terms used without reaching the tail tolerance")]
    BudgetExceeded { terms: u64 },

    /// Catastrophic cancellation exceeds what double-double rescue can
    /// recover; the result would carry fewer correct digits than requested.
    #[error("precision loss: ~{lost_digits:.1} digits cancel; beyond double-double rescue at the requested tolerance")]
    PrecisionLoss { lost_digits: f64 },

    /// Aggregation (check_bound / estimate_mu) received fewer usable rows
    /// than its minimum.
    #[error("insufficient data: {got} usable rows, {needed} required")]
    InsufficientData { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, QzetaError>;
