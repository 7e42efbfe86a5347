use alloc::vec::Vec;

use rand::Rng;

use super::transcript::{Payload, Transcript};
use crate::adversary::AttackModel;
use crate::qcore::{PartyId, QubitAllocator, QubitId, StateRegister};
use crate::{Error, Result};

/// Mutable per-session state every protocol step needs.
#[derive(Clone, Debug)]
pub struct Runtime<R> {
    pub rng: R,
    pub qubits: QubitAllocator,
    pub transcript: Transcript,
}

impl<R: Rng> Runtime<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, qubits: QubitAllocator::new(), transcript: Transcript::new() }
    }

    pub fn with_transcript(rng: R, transcript: Transcript) -> Self {
        Self { rng, qubits: QubitAllocator::new(), transcript }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Quantum,
    Classical,
}

/// Direction of travel relative to the channel's first endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    Outbound,
    Return,
}

/// In-order, lossless link between two parties, optionally tapped.
#[derive(Clone, Debug)]
pub struct Channel {
    ends: (PartyId, PartyId),
    kind: ChannelKind,
    tap: Option<AttackModel>,
    open: bool,
    log: Vec<u64>,
}

impl Channel {
    pub fn quantum(a: PartyId, b: PartyId) -> Self {
        Self { ends: (a, b), kind: ChannelKind::Quantum, tap: None, open: true, log: Vec::new() }
    }

    pub fn classical(a: PartyId, b: PartyId) -> Self {
        Self { kind: ChannelKind::Classical, ..Self::quantum(a, b) }
    }

    pub fn with_tap(mut self, tap: AttackModel) -> Self {
        self.tap = Some(tap);
        self
    }

    pub fn set_tap(&mut self, tap: Option<AttackModel>) {
        self.tap = tap;
    }

    pub fn tap(&self) -> Option<&AttackModel> {
        self.tap.as_ref()
    }

    pub fn tap_mut(&mut self) -> Option<&mut AttackModel> {
        self.tap.as_mut()
    }

    pub fn endpoints(&self) -> (PartyId, PartyId) {
        self.ends
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn is_open(&self) -> bool {
        self.open
    }

    pub fn close(&mut self) {
        self.open = false;
    }

    /// Sequence numbers of the transcript events this channel produced.
    pub fn log(&self) -> &[u64] {
        &self.log
    }

    fn route(&self, from: PartyId) -> Result<(Leg, PartyId)> {
        let (a, b) = self.ends;
        let (leg, to) = if from == a {
            (Leg::Outbound, b)
        } else if from == b {
            (Leg::Return, a)
        } else {
            return Err(Error::NotAnEndpoint(from));
        };
        if !self.open {
            return Err(Error::ChannelClosed(from, to));
        }
        Ok((leg, to))
    }

    /// Hands `qubit` to the other endpoint. `None` means the sender had
    /// nothing to send; a tap may still inject something. Returns whatever
    /// arrives.
    pub fn send_qubit<R: Rng>(
        &mut self,
        from: PartyId,
        qubit: Option<QubitId>,
        reg: &mut StateRegister,
        rt: &mut Runtime<R>,
    ) -> Result<Option<QubitId>> {
        let (leg, to) = self.route(from)?;
        if self.kind != ChannelKind::Quantum {
            return Err(Error::ClassicalChannel);
        }
        if let Some(q) = qubit {
            let seq = rt.transcript.record(from, "send_qubit", qubit_payload(to, q));
            self.log.push(seq);
        }
        let arrived = match self.tap.as_mut() {
            Some(tap) => tap.on_transit(leg, qubit, reg, &mut rt.qubits, &mut rt.rng)?,
            None => qubit,
        };
        let seq = match arrived {
            Some(q) => rt.transcript.record(to, "receive_qubit", qubit_payload(from, q)),
            None => rt.transcript.record(to, "nothing_received", alloc::vec![("from", from_str(from))]),
        };
        self.log.push(seq);
        Ok(arrived)
    }

    /// Broadcasts a classical record. Readable by anyone, forgeable by no one.
    pub fn publish<R>(
        &mut self,
        from: PartyId,
        action: &'static str,
        payload: Payload,
        rt: &mut Runtime<R>,
    ) -> Result<u64> {
        self.route(from)?;
        let seq = rt.transcript.record(from, action, payload);
        self.log.push(seq);
        Ok(seq)
    }
}

fn from_str(p: PartyId) -> super::transcript::Value {
    alloc::format!("{p}").into()
}

fn qubit_payload(peer: PartyId, q: QubitId) -> Payload {
    alloc::vec![("peer", from_str(peer)), ("qubit", alloc::format!("{q}").into())]
}
