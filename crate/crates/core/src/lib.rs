//! Coding-theoretic building blocks for network quantum communication.
//!
//! The crate is `no_std` (with `alloc`) and covers:
//!
//! * [`pauli`] and [`gf2`]: phase-free Pauli algebra over packed bit vectors.
//! * [`codes`]: CSS codes (repetition, Shor, rotated surface, hypergraph product).
//! * [`noise`]: Pauli channels, Bell-diagonal pair states, effective error rates.
//! * [`stabsim`]: a stabilizer-tableau simulator used as the ground truth.
//! * [`protocols`]: teleportation, superdense coding, swapping and purification.
//! * [`decoders`]: lookup, minimum-weight matching and belief propagation.
//! * [`ftec`]: teleportation-based (Knill) error correction.
//! * [`netchain`]: repeater chains with purification, swapping and encoded links.
//! * [`ratecalc`]: EPR generation rate for a fixed qubit budget.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod codes;
pub mod decoders;
pub mod error;
pub mod ftec;
pub mod gf2;
pub mod netchain;
pub mod noise;
pub mod pauli;
pub mod protocols;
pub mod ratecalc;
pub mod stabsim;

pub use codes::{CssCode, Syndrome};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVec};
pub use noise::{BellDiagonalState, NoiseModel};
pub use pauli::{Pauli, PauliOperator};
pub use stabsim::{Gate, StabilizerState};
