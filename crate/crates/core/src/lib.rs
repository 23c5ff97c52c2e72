//! Matchgate classical shadows.
//!
//! The crate is organised bottom-up:
//!
//! * [`majorana`]: Pauli strings, Majorana monomials, the Jordan–Wigner map.
//! * [`ensembles`]: Givens circuits, signed permutations, perfect matchings and
//!   samplers for the Haar, Clifford-angle and gate-optimal ensembles.
//! * [`state`]: dense state-vector simulation and Born sampling.
//! * [`shadows`]: measurement channel, estimators and the variance experiment.
//! * [`cubature`]: exact t-fold channel checks (3-design, sign and matching
//!   invariance, Γ witness).

pub mod cubature;
pub mod ensembles;
pub mod error;
pub mod majorana;
pub mod shadows;
pub mod state;

pub use error::{Error, Result};
