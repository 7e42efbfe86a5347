use core::fmt;

use num_complex::Complex64;

use super::{c, FRAC_1_SQRT_2};

pub type Matrix2 = [[Complex64; 2]; 2];
pub type Matrix4 = [[Complex64; 4]; 4];

/// Dense-coding alphabet. `Y` is the real matrix `|0⟩⟨1| − |1⟩⟨0|`, i.e.
/// `iσ_y`, not the Hermitian Pauli σ_y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];

    pub fn matrix(self) -> Matrix2 {
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        match self {
            PauliOp::I => [[l, o], [o, l]],
            PauliOp::X => [[o, l], [l, o]],
            PauliOp::Y => [[o, l], [-l, o]],
            PauliOp::Z => [[l, o], [o, -l]],
        }
    }

    /// Two-bit value carried by this operation: I=00, X=01, Y=10, Z=11.
    pub fn from_bits(hi: bool, lo: bool) -> Self {
        PauliOp::ALL[(hi as usize) << 1 | lo as usize]
    }

    pub fn bits(self) -> (bool, bool) {
        let v = self as u8;
        (v & 2 != 0, v & 1 != 0)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliOp::I => "I",
            PauliOp::X => "X",
            PauliOp::Y => "Y",
            PauliOp::Z => "Z",
        };
        f.write_str(s)
    }
}

/// The two authentication gates: CNOT controlled in the Z basis (`C0`) or in
/// the X basis (`C1`). Both are self-inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ControlledOp {
    C0,
    C1,
}

impl ControlledOp {
    pub fn matrix(self) -> Matrix4 {
        let h = FRAC_1_SQRT_2 * FRAC_1_SQRT_2;
        let (p0, p1): (Matrix2, Matrix2) = match self {
            ControlledOp::C0 => (
                [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]],
                [[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
            ),
            // |+⟩⟨+| and |−⟩⟨−|
            ControlledOp::C1 => (
                [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(h, 0.0)]],
                [[c(h, 0.0), c(-h, 0.0)], [c(-h, 0.0), c(h, 0.0)]],
            ),
        };
        let a = kron(&p0, &PauliOp::I.matrix());
        let b = kron(&p1, &PauliOp::X.matrix());
        let mut m = a;
        for r in 0..4 {
            for k in 0..4 {
                m[r][k] += b[r][k];
            }
        }
        m
    }
}

pub fn kron(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for k in 0..4 {
            m[r][k] = a[r >> 1][k >> 1] * b[r & 1][k & 1];
        }
    }
    m
}
