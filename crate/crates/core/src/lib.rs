//! Near-neighbor many-body models in one dimension whose ground states are
//! products of two-particle factors over neighboring pairs.
//!
//! A model is a geometry (line or circle), a particle count, a confinement ω
//! and a function φ. From φ the crate builds the potential with its one-, two-
//! and three-body parts, the ground state ψ and its energy, checks that ψ is
//! an eigenfunction by finite differences, and samples |ψ|².
//!
//! ```
//! use jastrow_core::models::{ground_energy, Geometry, ModelSpec, PhiFamily};
//! use jastrow_core::verify::residual_energy;
//!
//! let spec = ModelSpec::new(Geometry::Line, 3, 1.0, PhiFamily::rational(2.0)?)?;
//! let report = residual_energy(&spec, 20, 7, 1e-4)?;
//! assert!(report.passed());
//! assert_eq!(ground_energy(&spec)?, 11.0);
//! # Ok::<(), jastrow_core::Error>(())
//! ```

pub mod constants;
pub mod elliptic;
pub mod error;
pub mod models;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
pub(crate) mod oracle;
