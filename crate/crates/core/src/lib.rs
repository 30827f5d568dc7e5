//! Bound states of the D-dimensional Hulthén potential.
//!
//! Closed-form spectrum and wavefunctions under the exponential centrifugal
//! approximation, the quantization-rule machinery that reproduces them, and
//! independent numerical oracles (adaptive quadrature, finite differences).

pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod qrule;
pub mod roots;
pub mod spectrum;
pub mod wavefn;

pub use error::{Error, Result};
pub use model::{CentrifugalMode, DerivedParams, PhysicalParams, QuantumNumbers, Validity};
