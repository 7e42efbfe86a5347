use thiserror::Error;

use crate::qcore::{PartyId, QubitId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit {0} is not in the register")]
    UnknownQubit(QubitId),
    #[error("qubit {0} appears more than once")]
    DuplicateQubit(QubitId),
    #[error("control and target are the same qubit {0}")]
    ControlIsTarget(QubitId),
    #[error("register of {requested} qubits exceeds the cap of {cap}")]
    TooManyQubits { requested: usize, cap: usize },
    #[error("a GHZ state needs at least two qubits, got {0}")]
    GhzTooSmall(usize),
    #[error("{got} amplitudes do not match a register of {qubits} qubits")]
    AmplitudeLength { qubits: usize, got: usize },
    #[error("state has squared norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("measurement basis spans {basis} qubits but {qubits} were given")]
    BasisWidth { basis: usize, qubits: usize },
    #[error("qubit {0} is not in a definite computational state")]
    NotSeparable(QubitId),
    #[error("expected a |Φ+⟩ pair, fidelity is {0}")]
    NotBellPair(f64),
    #[error("expected a GHZ state, fidelity is {0}")]
    NotGhz(f64),
    #[error("authentication key length {0} is odd")]
    OddKeyLength(usize),
    #[error("authentication key exhausted after {0} rounds")]
    KeyExhausted(usize),
    #[error("channel {0} -> {1} is closed")]
    ChannelClosed(PartyId, PartyId),
    #[error("{0} is not an endpoint of this channel")]
    NotAnEndpoint(PartyId),
    #[error("cannot send qubits over a classical channel")]
    ClassicalChannel,
    #[error("{0} has not been authenticated")]
    Unauthenticated(PartyId),
    #[error("no retained EPR pairs left for {0}")]
    EprExhausted(PartyId),
    #[error("at least two users are required, got {0}")]
    TooFewUsers(usize),
    #[error("symbol has {got} bits, layout needs {expected}")]
    SymbolWidth { expected: usize, got: usize },
    #[error("symbol layout is not decodable: two messages share an outcome")]
    AmbiguousFraming,
    #[error("tampering alarm: outcome of symbol {symbol} matches no message")]
    Tampering { symbol: usize },
    #[error("invalid message: {0}")]
    InvalidMessage(&'static str),
    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("parameters are not normalized (squared norm {0})")]
    NotNormalizedParams(f64),
    #[error("attack map does not preserve the norm of this state (squared norm {0})")]
    NonPhysicalMap(f64),
    #[error("number of key bits must be even and at least 2, got {0}")]
    KeyBits(u32),
}

pub type Result<T> = core::result::Result<T, Error>;
