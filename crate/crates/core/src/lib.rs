//! Exact pure-state simulation of teleportation, superdense coding and LOCC
//! discrimination over four-qubit entangled resources.
//!
//! The crate is `no_std` and only needs `alloc`. Qubit 0 is always the leftmost
//! symbol of a ket label.
#![no_std]

extern crate alloc;

pub mod catalog;
pub mod densecode;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod locc;
pub mod measure;
pub mod state;
pub mod teleport;

pub use error::{Error, Result};
pub use state::{DensityMatrix, LocalUnitary, Pauli, PureState, C64, MAX_QUBITS, NORM_TOL, TOL};
