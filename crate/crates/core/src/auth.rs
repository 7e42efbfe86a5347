//! EPR + controlled-NOT handshake between the server and one user.
//!
//! Per round, with key pair `(a₁, a₂)`:
//!
//! 1. the server prepares `|Φ⁺⟩` on `(q, u)` and sends `u`;
//! 2. the user prepares `n = |a₁ ⊕ a₂⟩`, applies `C_OP` with control `u`
//!    and target `n` (`C0` when `a₁ = 0`, `C1` otherwise) and returns `n`;
//! 3. the server applies the same `C_OP` with control `q`, measures `n` in
//!    Z and accepts iff the reading equals `a₁ ⊕ a₂`.
//!
//! On the honest path `n` reads `a₁ ⊕ a₂` with certainty and `(q, u)` is
//! back in `|Φ⁺⟩`, so the pair can be kept for GHZ fabrication.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::comms::{Channel, Runtime};
use crate::ghzfab::EprPair;
use crate::qcore::{BellOutcome, ControlledOp, PartyId, StateRegister};
use crate::{Error, Result};

/// Pre-shared key `A₁…A₂ₖ`, consumed two bits per round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuthKey {
    bits: Vec<bool>,
    cursor: usize,
}

impl AuthKey {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.len() % 2 == 1 {
            return Err(Error::OddKeyLength(bits.len()));
        }
        Ok(Self { bits, cursor: 0 })
    }

    pub fn random<R: Rng + ?Sized>(pairs: usize, rng: &mut R) -> Self {
        Self { bits: (0..2 * pairs).map(|_| rng.gen::<bool>()).collect(), cursor: 0 }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn pairs_remaining(&self) -> usize {
        (self.bits.len() - self.cursor) / 2
    }

    pub fn next_pair(&mut self) -> Result<(bool, bool)> {
        if self.pairs_remaining() == 0 {
            return Err(Error::KeyExhausted(self.cursor / 2));
        }
        let pair = (self.bits[self.cursor], self.bits[self.cursor + 1]);
        self.cursor += 2;
        Ok(pair)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundOutcome {
    Accept,
    Reject,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuthRound {
    pub index: usize,
    pub key_pair: (bool, bool),
    /// `None` when nothing came back to the server.
    pub measured_value: Option<bool>,
    pub outcome: RoundOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Authenticated,
    Terminated,
}

#[derive(Clone, Debug)]
pub struct AuthResult {
    pub user: PartyId,
    pub rounds: Vec<AuthRound>,
    pub error_rate: f64,
    pub verdict: Verdict,
    /// `(q, u)` pairs of accepted rounds; empty unless authenticated.
    pub pairs: Vec<EprPair>,
}

/// Value the server expects to read from `n`.
pub fn check_bit(key_pair: (bool, bool)) -> bool {
    key_pair.0 ^ key_pair.1
}

pub fn controlled_op(key_pair: (bool, bool)) -> ControlledOp {
    if key_pair.0 {
        ControlledOp::C1
    } else {
        ControlledOp::C0
    }
}

/// One handshake round over `channel`, whose endpoints must be the server
/// (first) and `user`.
pub fn run_auth_round<R: Rng>(
    user: PartyId,
    index: usize,
    key_pair: (bool, bool),
    channel: &mut Channel,
    rt: &mut Runtime<R>,
) -> Result<(AuthRound, Option<EprPair>)> {
    if channel.endpoints() != (PartyId::Server, user) {
        return Err(Error::NotAnEndpoint(user));
    }
    let op = controlled_op(key_pair);
    let expected = check_bit(key_pair);

    let q = rt.qubits.fresh(PartyId::Server);
    let u = rt.qubits.fresh(PartyId::Server);
    let mut reg = StateRegister::bell([q, u], BellOutcome::PhiPlus)?;
    rt.transcript.record(PartyId::Server, "prepare_epr", vec![("round", index.into())]);

    let received = channel.send_qubit(PartyId::Server, Some(u), &mut reg, rt)?;
    let reply = match received {
        Some(u_in) => {
            let n = rt.qubits.fresh(user);
            reg.adjoin(n, expected)?;
            reg.apply_controlled(u_in, n, op)?;
            rt.transcript.record(user, "apply_controlled", vec![("round", index.into())]);
            Some(n)
        }
        None => None,
    };
    let returned = channel.send_qubit(user, reply, &mut reg, rt)?;

    let measured_value = match returned {
        Some(n) => {
            reg.apply_controlled(q, n, op)?;
            let v = reg.measure_z(n, &mut rt.rng)?;
            reg.discard(n)?;
            Some(v)
        }
        None => None,
    };
    let outcome = if measured_value == Some(expected) { RoundOutcome::Accept } else { RoundOutcome::Reject };
    rt.transcript.record(
        PartyId::Server,
        "round_result",
        vec![("round", index.into()), ("accept", (outcome == RoundOutcome::Accept).into())],
    );
    let kept = match (outcome, received) {
        (RoundOutcome::Accept, Some(_)) => Some(EprPair { reg, server: q, user: u, holder: user }),
        _ => None,
    };
    Ok((AuthRound { index, key_pair, measured_value, outcome }, kept))
}

/// Runs `rounds` handshakes and terminates iff the rejection rate exceeds
/// `threshold`.
pub fn authenticate_user<R: Rng>(
    user: PartyId,
    key: &mut AuthKey,
    rounds: usize,
    threshold: f64,
    channel: &mut Channel,
    rt: &mut Runtime<R>,
) -> Result<AuthResult> {
    if rounds > key.pairs_remaining() {
        return Err(Error::KeyExhausted(key.pairs_remaining()));
    }
    let mut log = Vec::with_capacity(rounds);
    let mut pairs = Vec::new();
    for index in 0..rounds {
        let pair = key.next_pair()?;
        let (round, kept) = run_auth_round(user, index, pair, channel, rt)?;
        log.push(round);
        pairs.extend(kept);
    }
    let rejected = log.iter().filter(|r| r.outcome == RoundOutcome::Reject).count();
    let error_rate = if rounds == 0 { 0.0 } else { rejected as f64 / rounds as f64 };
    let verdict = if error_rate > threshold { Verdict::Terminated } else { Verdict::Authenticated };
    if verdict == Verdict::Terminated {
        pairs.clear();
        channel.close();
    }
    rt.transcript.record(
        PartyId::Server,
        "auth_verdict",
        vec![
            ("user", alloc::format!("{user}").into()),
            ("rounds", rounds.into()),
            ("error_rate", error_rate.into()),
            ("authenticated", (verdict == Verdict::Authenticated).into()),
        ],
    );
    Ok(AuthResult { user, rounds: log, error_rate, verdict, pairs })
}
