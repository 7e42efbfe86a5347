use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::encoding::{encode_symbol, SymbolLayout};
use crate::qcore::{Basis, GhzOutcome, PartyId, PauliOp, QubitId, Sign, StateRegister};
use crate::{Error, Result, TOLERANCE};

/// Who measures the GHZ state and who publishes an X reading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// The receiver GHZ-measures; the server publishes.
    Partial,
    /// The server GHZ-measures and publishes; the receiver publishes too.
    Full,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Partial => "partial",
            Mode::Full => "full",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "partial" => Some(Mode::Partial),
            "full" => Some(Mode::Full),
            _ => None,
        }
    }

    /// Given the server qubit and the users' qubits (receiver last), returns
    /// the GHZ-measured qubits (senders first) and the X-measured qubit.
    pub fn roles(self, server: QubitId, users: &[QubitId]) -> (Vec<QubitId>, QubitId) {
        let (senders, receiver) = users.split_at(users.len() - 1);
        let mut measured = senders.to_vec();
        match self {
            Mode::Partial => {
                measured.push(receiver[0]);
                (measured, server)
            }
            Mode::Full => {
                measured.push(server);
                (measured, receiver[0])
            }
        }
    }

    /// Parties holding the GHZ measurer's and the publisher's qubits.
    pub fn measurer_and_publisher(self, receiver: PartyId) -> (PartyId, PartyId) {
        match self {
            Mode::Partial => (receiver, PartyId::Server),
            Mode::Full => (PartyId::Server, receiver),
        }
    }
}

/// One `(message, outcome, publication)` triple with nonzero amplitude.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeRow {
    pub symbol: u32,
    pub ops: Vec<PauliOp>,
    pub outcome: GhzOutcome,
    pub publication: Sign,
    /// Coefficient of `|outcome⟩|publication⟩` in the encoded state.
    pub amplitude: Complex64,
}

/// Receiver lookup from `(GHZ outcome, X publication)` to symbol, built by
/// encoding every symbol on a fresh GHZ state and expanding the result in
/// the measurement basis.
#[derive(Clone, Debug)]
pub struct DecodeTable {
    layout: SymbolLayout,
    mode: Mode,
    rows: Vec<DecodeRow>,
    lookup: Vec<Option<u32>>,
}

impl DecodeTable {
    /// Fails with [`Error::AmbiguousFraming`] if two symbols can produce the
    /// same observation.
    pub fn generate(layout: &SymbolLayout, mode: Mode) -> Result<Self> {
        let n = layout.n_users();
        let server = QubitId { owner: PartyId::Server, index: 0 };
        let users: Vec<QubitId> = (1..=n as u32).map(|k| QubitId { owner: PartyId::User(k as u16), index: k }).collect();
        let (measured, publisher) = mode.roles(server, &users);
        let mut qs = measured.clone();
        qs.push(publisher);
        let width = measured.len();
        let basis = Basis::ghz(width).tensor(&Basis::x());
        let mut all = vec![server];
        all.extend_from_slice(&users);
        let fresh = StateRegister::ghz(all)?;

        let mut rows = Vec::new();
        let mut lookup = vec![None; basis.len()];
        for symbol in 0..1u32 << layout.width() {
            let ops = encode_symbol(layout, &layout.bits_of(symbol))?;
            let mut reg = fresh.clone();
            for (k, &op) in ops.iter().enumerate() {
                reg.apply_pauli(users[k], op)?;
            }
            for (k, amp) in reg.projections(&qs, &basis)?.into_iter().enumerate() {
                let amplitude = amp[0];
                if amplitude.norm_sqr() < TOLERANCE {
                    continue;
                }
                match lookup[k] {
                    Some(other) if other != symbol => return Err(Error::AmbiguousFraming),
                    _ => lookup[k] = Some(symbol),
                }
                rows.push(DecodeRow {
                    symbol,
                    ops: ops.clone(),
                    outcome: GhzOutcome::from_index(width, k >> 1),
                    publication: Sign::from_bit(k & 1 == 1),
                    amplitude,
                });
            }
        }
        Ok(Self { layout: layout.clone(), mode, rows, lookup })
    }

    pub fn layout(&self) -> &SymbolLayout {
        &self.layout
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn rows(&self) -> &[DecodeRow] {
        &self.rows
    }

    /// `None` means no symbol can produce this observation.
    pub fn decode(&self, outcome: GhzOutcome, publication: Sign) -> Option<u32> {
        if outcome.width() != self.layout.n_users() {
            return None;
        }
        self.decode_index(outcome.index() << 1 | usize::from(publication.is_minus()))
    }

    /// Lookup by position in `ghz ⊗ x` basis order.
    pub fn decode_index(&self, k: usize) -> Option<u32> {
        self.lookup.get(k).copied().flatten()
    }
}
