//! Torus-shaped lattices of modified FitzHugh-Nagumo oscillators.
//!
//! The crate covers the full pipeline for one torus and for two coupled
//! tori: the network vector fields and their symmetry actions
//! ([`model`]), the closed-form linearization spectrum with a dense
//! numeric oracle, Hopf-boundary location and origin stability
//! ([`spectrum`]), the first-Lyapunov-sign Hopf classification of the
//! single neuron ([`normalform`]), fixed-step integration ([`dynamics`]),
//! and trajectory classification into decay, in-phase oscillation,
//! discrete rotating waves, and two-tori multifrequency patterns
//! ([`analysis`]). The [`cli`] module backs the `fhn-torus` binary.

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod normalform;
pub mod spectrum;

pub use error::{Error, Result};
