//! Kitaev chain with imbalanced p-wave pairing.
//!
//! Momentum-space spectra and the exact phase diagram, the biorthogonal
//! Zak phase, exceptional points, complex Bogoliubov coefficients and the
//! open chain with its Majorana zero modes and edge states.

pub mod biortho;
pub mod bogoliubov;
pub mod error;
pub mod model;
pub mod numerics;
pub mod phases;
pub mod realspace;

pub use error::{Error, Result};
pub use model::ModelParams;
pub use phases::{classify, PhaseKind, PhaseLabel};
