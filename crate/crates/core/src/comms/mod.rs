//! Dense-coding message transfer over shared GHZ states.
//!
//! Senders apply Paulis to their GHZ qubits and ship them to the measurer.
//! In partial mode the receiver measures in the GHZ basis and the server
//! publishes an X reading of its own qubit; in full mode the roles swap.
//! The receiver decodes through a table generated by encoding every symbol
//! on a fresh state.

mod channel;
mod decode;
mod encoding;
mod session;
mod transcript;

pub use channel::{Channel, ChannelKind, Leg, Runtime};
pub use decode::{DecodeRow, DecodeTable, Mode};
pub use encoding::{bit_string, encode_symbol, Message, SymbolLayout};
pub use session::{
    eavesdrop_check, AttackSpec, CheckReport, CheckVerdict, Session, SessionConfig, SessionReport, SlotRecord, Status,
    Transmission,
};
#[cfg(feature = "serde")]
pub use transcript::Final;
pub use transcript::{Event, Header, Payload, Transcript, Value};
