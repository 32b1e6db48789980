use thiserror::Error;

use crate::phases::PhaseKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("pairing product delta_a * delta_b must be positive, got {0}")]
    NonPositivePairing(f64),

    #[error("dispersion vanishes at k = {k} (|eps| = {magnitude:e}); eigenvectors coalesce")]
    DegenerateMomentum { k: f64, magnitude: f64 },

    #[error("k = {k} is not a zero of the dispersion (radicand {radicand:e})")]
    NotCritical { k: f64, radicand: f64 },

    #[error("parameters are not in a gapped phase (classified as {0})")]
    NotGapped(PhaseKind),

    #[error("outside the analytic zero-mode case: {0}")]
    NotAnalytic(String),

    #[error("eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
