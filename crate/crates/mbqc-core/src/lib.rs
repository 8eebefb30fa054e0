//! Measurement-based quantum computation on dense state vectors.
//!
//! The crate simulates the one-way model: qubits of an open graph state are
//! consumed by single-qubit measurements whose bases adapt to earlier
//! outcomes. On top of the simulator it provides
//!
//! - flow validation and correction-set derivation for open graphs,
//! - a universal gate-gadget library (H, X, Z, T, RZ(θ), CZ) with
//!   branch-exact equivalence checks against the dense unitaries,
//! - the 18-qubit two-row pattern realizing two-qubit Grover search for all
//!   four oracles, plus its circuit-model reference,
//! - a two-party blind-delegation protocol over the same pattern, where the
//!   client hides measurement angles behind random octant rotations and
//!   outcome flips.
//!
//! The crate is `no_std` (`alloc` required); IO, file formats, and the
//! command-line front end live in the companion `mbqc-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod angle;
pub mod bits;
pub mod error;
pub mod frontier;
pub mod gadget;
pub mod graph;
pub mod grover;
pub mod histogram;
pub mod pattern;
pub mod rng;
pub mod state;
pub mod stats;
pub mod ubqc;

pub use angle::Angle;
pub use bits::ClassicalBits;
pub use error::{Error, Result};
pub use graph::{Flow, InputSpec, OpenGraph};
pub use histogram::ShotHistogram;
pub use num_complex::Complex64;
pub use pattern::{Basis, Engine, MeasurementPattern, RunOptions};
pub use rng::RngStream;
pub use state::{OutcomeSource, StateVector};

/// Norm and amplitude tolerance used across invariants and tests.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-9;
