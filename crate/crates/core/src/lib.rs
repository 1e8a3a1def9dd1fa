//! Excitation of a two-level atom by a single-photon wavepacket.
//!
//! The crate models the one-excitation sector of an atom coupled to a
//! discretized flat mode continuum. It provides closed-form amplitudes for the
//! time-reversed and reflected dipole waves, a fixed-step propagator for
//! arbitrary initial states, and a derivative-free optimizer over pulse-shape
//! families.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod atom;
pub mod envelope;
pub mod error;
pub mod grid;
pub mod optimizer;
pub mod propagator;
pub mod quadrature;
pub mod state;
pub mod transform;

mod sum;

pub use atom::AtomParams;
pub use envelope::TemporalEnvelope;
pub use error::{Error, Result};
pub use grid::ModeGrid;
pub use state::{PhotonState, StateLabel};
