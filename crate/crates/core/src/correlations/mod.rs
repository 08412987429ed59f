//! Vacuum and thermal two-point functions and their conformal transformation
//! laws.
//!
//! The scalar kernel is `c(x, x′) = 1 / ((x − x′)² − iε(t − t′))`. The
//! potential correlator in Feynman gauge is `(ħ/π) η_{μν} c`, and field
//! tensor correlators are built from it by finite differences.

mod em;
mod kernel;
mod momentum;
mod spectra;

pub use self::em::{
    em_correlation_routes, em_potential_correlation, field_tensor_correlation,
    field_tensor_correlation_at, gauge_terms_contribution, minkowski_field_tensor_analytic,
    tetrad_contraction, transformed_em_correlation, verify_em_invariance, CorrectionTerms,
    EmInvarianceReport, EmRoutes, FieldTensorCorrelation, Frame, MinkowskiCorrelator,
    PotentialCorrelationMatrix, PotentialCorrelator, TetradContraction, TransformedCorrelator,
    EPSILON_LEVELS, RICHARDSON_GATE, ROUTE_TOLERANCE,
};
pub use self::kernel::{
    scalar_vacuum_correlation, verify_scalar_invariance, RegularizedKernel,
    ScalarInvarianceReport,
};
pub use self::momentum::{
    momentum_space_closed_form, momentum_space_oracle, proportionality_fit, ProportionalityFit,
    ORACLE_TOLERANCE,
};
pub use self::spectra::{
    scalar_commutator_spectrum, thermal_spectra, vacuum_spectra, SpectralPoint,
};

pub use num_complex::Complex64;

/// `|a − b| / max(|b|, 1)` for complex values.
pub(crate) fn complex_residual(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
