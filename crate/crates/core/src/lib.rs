//! Verification toolkit for the all-versus-nothing nonlocality of a single
//! photon spread over N spatial sites.
//!
//! The state under study is the equal superposition of the photon occupying
//! one of N sites (a W state). Measuring each site in Z asks "is the site
//! occupied?"; measuring in X probes the ± superpositions. Four layers:
//!
//! - [`statevector`] — sparse pure states, Z/X projectors, measurement
//!   probabilities.
//! - [`constraints`] — the families of outcome combinations the quantum
//!   state forbids (probability exactly 0), with numerical verification.
//! - [`lhv`] — exhaustive enumeration of deterministic local models over
//!   those constraints, and the machine check that every surviving model
//!   predicts the same X outcome at every site.
//! - [`analysis`] — the quantum probability of the all-X-equal event, the
//!   quantum-vs-local gap, and outcome/parameter independence scans.
//!
//! Everything is exact and deterministic: no randomness, no sampling.

pub mod analysis;
pub mod constraints;
mod error;
pub mod lhv;
pub mod statevector;

pub use error::{Error, Result};
