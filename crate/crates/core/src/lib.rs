//! Secrecy performance of artificial-noise-aided multi-cell downlinks.
//!
//! The crate evaluates connection outage, secrecy outage bounds and secrecy
//! throughput of a downlink in which each base station beamforms towards its
//! user along an imperfect (pilot-contaminated) channel estimate and radiates
//! artificial noise in the estimate's null space. Every analytical evaluator
//! has a Monte Carlo counterpart in [`montecarlo`] that simulates the network
//! directly.
//!
//! Module map:
//! - [`config`]: parameters, unit conversion, derived scalars.
//! - [`specfun`]: `₂F₁`, gamma and incomplete gamma functions.
//! - [`quadrature`]: adaptive Gauss–Kronrod and Gauss–Legendre rules.
//! - [`geometry`]: PPP sampling and eavesdropper chord geometry.
//! - [`analysis`]: closed-form outage evaluators.
//! - [`montecarlo`]: the simulation oracle.
//! - [`throughput`]: cell averaging, threshold solving, throughput and power-split optimization.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too; the
// tabulated quadrature nodes and series constants are kept at full published precision.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analysis;
pub mod config;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod quadrature;
pub mod specfun;
pub mod throughput;

pub use config::{
    dbm_to_linear, thinned_bs_intensity, wyner_from_thresholds, AnIntensity, CampbellMode, OutageConstraints,
    SystemConfig, WynerRates,
};
pub use error::{Error, Result};
