//! Error type shared across the simulator and protocol layers.

use alloc::string::String;
use core::fmt;

/// Errors surfaced by state, graph, pattern, and protocol operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Qubit count outside the supported `1..=24` range.
    QubitCountOutOfRange { requested: usize },
    /// Register size does not match what the operation expects.
    SizeMismatch { expected: usize, got: usize },
    /// Gate or measurement target outside the register.
    TargetOutOfRange { target: usize, num_qubits: usize },
    /// A multi-qubit gate addressed the same qubit twice.
    DuplicateTarget { target: usize },
    /// Qubit measured twice without the explicit re-measurement override.
    AlreadyMeasured { qubit: usize },
    /// Classical outcome requested from a qubit that has not been measured.
    NotMeasured { qubit: usize },
    /// Node measured before one of its correction dependencies.
    DependencyUnmeasured { node: usize, dependency: usize },
    /// Graph, flow, or pattern violates a structural invariant.
    Structure(String),
    /// Operation invoked with arguments outside its contract.
    Usage(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::QubitCountOutOfRange { requested } => {
                write!(f, "qubit count {requested} outside supported range 1..=24")
            }
            Error::SizeMismatch { expected, got } => {
                write!(f, "size mismatch: expected {expected}, got {got}")
            }
            Error::TargetOutOfRange { target, num_qubits } => {
                write!(f, "target {target} out of range for {num_qubits} qubits")
            }
            Error::DuplicateTarget { target } => {
                write!(f, "duplicate target qubit {target}")
            }
            Error::AlreadyMeasured { qubit } => {
                write!(
                    f,
                    "qubit {qubit} already measured (re-measurement needs the override)"
                )
            }
            Error::NotMeasured { qubit } => write!(f, "qubit {qubit} has not been measured"),
            Error::DependencyUnmeasured { node, dependency } => {
                write!(f, "node {node} measured before its dependency {dependency}")
            }
            Error::Structure(msg) => write!(f, "structure error: {msg}"),
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
