//! Simulation of a copy-protected quantum data medium.
//!
//! Classical bits are hidden in secret rotation angles of single-qubit
//! states. The issuer mints a medium carrying encrypted data qubits,
//! doubling-angle key strings, and a reference hash qubit; a reader
//! decrypts through stored-rotation steps with a correction cascade; a
//! verifier authenticates the key material with controlled-SWAP tests; and
//! an adversary module quantifies what a pirate who measures and
//! re-prepares can achieve. The `analysis` module collects the closed-form
//! probabilities the simulator is checked against.

pub mod adversary;
pub mod analysis;
pub mod authenticate;
pub mod error;
pub mod issuer;
pub mod montecarlo;
pub mod qsim;
pub mod reader;
pub mod rng;

pub use error::{Error, Result};
pub use qsim::{Amplitude, Gate, MeasurementOutcome, StateVector};
