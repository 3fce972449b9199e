//! Numerical tolerances shared across modules.

/// Relative tolerance for positivity and Hermiticity tests, scaled by the
/// spectral-norm estimate of the operator under test.
pub const PSD: f64 = 1e-9;

/// Absolute tolerance for probability normalization (vectors, tensors,
/// conditional tables).
pub const PROBABILITY: f64 = 1e-12;

/// Absolute tolerance for unit trace of density operators.
pub const TRACE: f64 = 1e-9;

/// Tolerance for unitality / trace preservation of linear maps.
pub const MAP: f64 = 1e-9;
