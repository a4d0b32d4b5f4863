//! Coined quantum walks on Cayley graphs of `Z_2^n` generated by all weight-`s` vectors.
//!
//! - [`math`]: exact binomials, weight characteristics, Kravchuk coefficients, eigenphases.
//! - [`spectral`]: closed-form return and hit amplitudes, predicted times.
//! - [`dense`]: state-vector simulator and exhaustive graph checks.
//! - [`layers`]: adjacency between weight layers.
//! - [`oracle`]: name-obfuscated neighbor oracle and the two antipode searches.
//! - [`measured`]: the walk absorbed at the origin.
//! - [`verify`]: named invariant sweeps.

pub mod dense;
pub mod error;
pub mod layers;
pub mod math;
pub mod measured;
pub mod oracle;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use math::{SpectralTable, WalkSpec};
