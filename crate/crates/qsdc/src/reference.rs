//! Published decode correlations and the worked 100111 example, transcribed
//! row by row.

use qsdc_core::qcore::{PauliOp, Sign};

use PauliOp::{I, X, Y, Z};
use Sign::{Minus, Plus};

/// One published decode row: what the publisher announced, what the
/// measurer saw, which Paulis the senders applied and the bits sent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefRow {
    pub publication: Sign,
    pub glyph: &'static str,
    pub sign: Sign,
    pub ops: &'static [PauliOp],
    pub bits: &'static str,
}

const fn row(publication: Sign, glyph: &'static str, sign: Sign, ops: &'static [PauliOp], bits: &'static str) -> RefRow {
    RefRow { publication, glyph, sign, ops, bits }
}

/// A named set of reference rows for one user count in partial mode.
#[derive(Clone, Copy, Debug)]
pub struct RefSet {
    pub name: &'static str,
    pub n_users: usize,
    pub rows: &'static [RefRow],
}

pub const TWO_PARTY: RefSet = RefSet {
    name: "two-party partial",
    n_users: 2,
    rows: &[
        row(Plus, "Phi", Plus, &[I], "00"),
        row(Plus, "psi", Plus, &[X], "01"),
        row(Plus, "psi", Minus, &[Y], "10"),
        row(Plus, "Phi", Minus, &[Z], "11"),
        row(Minus, "Phi", Minus, &[I], "00"),
        row(Minus, "psi", Minus, &[X], "01"),
        row(Minus, "psi", Plus, &[Y], "10"),
        row(Minus, "Phi", Plus, &[Z], "11"),
    ],
};

pub const THREE_PARTY: RefSet = RefSet {
    name: "three-party partial",
    n_users: 3,
    rows: &[
        row(Plus, "Psi", Plus, &[I, I], "000"),
        row(Plus, "phi", Plus, &[I, X], "001"),
        row(Plus, "psi", Plus, &[X, I], "010"),
        row(Plus, "varphi", Plus, &[X, X], "011"),
        row(Plus, "psi", Minus, &[Y, I], "100"),
        row(Plus, "varphi", Minus, &[Y, X], "101"),
        row(Plus, "Psi", Minus, &[Z, I], "110"),
        row(Plus, "phi", Minus, &[Z, X], "111"),
        row(Minus, "Psi", Minus, &[I, I], "000"),
        row(Minus, "phi", Minus, &[I, X], "001"),
        row(Minus, "psi", Minus, &[X, I], "010"),
        row(Minus, "varphi", Minus, &[X, X], "011"),
        row(Minus, "psi", Plus, &[Y, I], "100"),
        row(Minus, "varphi", Plus, &[Y, X], "101"),
        row(Minus, "Psi", Plus, &[Z, I], "110"),
        row(Minus, "phi", Plus, &[Z, X], "111"),
    ],
};

pub const REFERENCE_SETS: [RefSet; 2] = [TWO_PARTY, THREE_PARTY];

/// One column of the worked example.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorkedStep {
    pub bits: &'static str,
    pub op: PauliOp,
    pub glyph: &'static str,
    pub sign: Sign,
    pub publication: Sign,
}

pub const WORKED_MESSAGE: &str = "100111";

/// Same columns in both modes; only who measures and who publishes differs.
pub const WORKED_STEPS: [WorkedStep; 3] = [
    WorkedStep { bits: "10", op: Y, glyph: "psi", sign: Minus, publication: Plus },
    WorkedStep { bits: "01", op: X, glyph: "psi", sign: Plus, publication: Plus },
    WorkedStep { bits: "11", op: Z, glyph: "Phi", sign: Plus, publication: Minus },
];
