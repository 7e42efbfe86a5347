//! Simulation core for N-user quantum secure direct communication with
//! authentication.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that touches files,
//! the terminal, or threads lives in the companion `qsdc` crate.
//!
//! Layout:
//!
//! - [`qcore`]: dense state-vector engine over labeled qubits.
//! - [`auth`]: EPR + controlled-NOT handshake between the server and a user.
//! - [`ghzfab`]: turns retained EPR pairs into shared GHZ states.
//! - [`comms`]: dense-coding message transfer, channels, transcripts, sessions.
//! - [`adversary`]: channel taps and the closed-form security analysis.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adversary;
pub mod auth;
pub mod comms;
mod error;
pub mod ghzfab;
pub mod qcore;

pub use error::{Error, Result};

/// Absolute tolerance used for every floating-point comparison.
pub const TOLERANCE: f64 = 1e-9;
