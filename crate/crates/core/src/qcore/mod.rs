//! Dense state-vector engine over labeled qubits.
//!
//! Amplitude index bit ordering is big-endian: the first qubit in a
//! register's list is the most significant bit of the index.

mod density;
mod gates;
mod measure;
mod register;

pub use density::{holevo_chi, DensityMatrix};
pub use gates::{ControlledOp, Matrix2, Matrix4, PauliOp};
pub use measure::{Basis, BellOutcome, GhzOutcome, Sign, XOutcome};
pub use register::{PartyId, QubitAllocator, QubitId, StateRegister, DEFAULT_MAX_QUBITS};

pub use num_complex::Complex64;

pub(crate) const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn uniform<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}
