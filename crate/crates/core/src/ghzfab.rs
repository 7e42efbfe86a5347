//! Turns retained EPR pairs into shared GHZ states.
//!
//! Extension step: the server holds `s` in a GHZ state and `s′` in a fresh
//! `|Φ⁺⟩` with user qubit `j`. It applies CNOT `s → s′`, reads `s′` in Z and,
//! on a 1, has `X` applied to `j`. The result is a GHZ state over the old
//! qubits plus `j`, whatever the reading.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::qcore::{c, BellOutcome, ControlledOp, PartyId, PauliOp, QubitId, StateRegister, FRAC_1_SQRT_2};
use crate::{Error, Result, TOLERANCE};

/// A `(q, u)` pair kept after an accepted authentication round. `reg` may
/// carry extra qubits (for instance an eavesdropper's ancillas).
#[derive(Clone, Debug)]
pub struct EprPair {
    pub reg: StateRegister,
    pub server: QubitId,
    pub user: QubitId,
    pub holder: PartyId,
}

fn ghz_vector(width: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); 1 << width];
    v[0] = c(FRAC_1_SQRT_2, 0.0);
    v[(1 << width) - 1] = c(FRAC_1_SQRT_2, 0.0);
    v
}

impl EprPair {
    /// Fidelity of the reduced `(server, user)` state with `|Φ⁺⟩`.
    pub fn fidelity(&self) -> Result<f64> {
        self.reg.overlap_on(&[self.server, self.user], &ghz_vector(2))
    }

    /// The pair on its own, ordered `(server, user)`.
    fn isolate(self) -> Result<StateRegister> {
        let f = self.fidelity()?;
        if f < 1.0 - TOLERANCE {
            return Err(Error::NotBellPair(f));
        }
        if self.reg.len() == 2 {
            self.reg.reordered(&[self.server, self.user])
        } else {
            // Fidelity one means the pair factors out of whatever else is held.
            StateRegister::bell([self.server, self.user], BellOutcome::PhiPlus)
        }
    }
}

/// Retained pairs per user, plus the set of users that passed
/// authentication.
#[derive(Clone, Debug, Default)]
pub struct EprInventory {
    stock: BTreeMap<PartyId, VecDeque<EprPair>>,
    authenticated: BTreeSet<PartyId>,
}

impl EprInventory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn deposit(&mut self, user: PartyId, pairs: impl IntoIterator<Item = EprPair>) {
        self.stock.entry(user).or_default().extend(pairs);
    }

    pub fn mark_authenticated(&mut self, user: PartyId) {
        self.authenticated.insert(user);
    }

    pub fn is_authenticated(&self, user: PartyId) -> bool {
        self.authenticated.contains(&user)
    }

    pub fn remaining(&self, user: PartyId) -> usize {
        self.stock.get(&user).map_or(0, VecDeque::len)
    }

    fn ensure(&self, user: PartyId) -> Result<()> {
        if !self.is_authenticated(user) {
            return Err(Error::Unauthenticated(user));
        }
        if self.remaining(user) == 0 {
            return Err(Error::EprExhausted(user));
        }
        Ok(())
    }

    pub fn take(&mut self, user: PartyId) -> Result<EprPair> {
        self.ensure(user)?;
        self.stock.get_mut(&user).and_then(VecDeque::pop_front).ok_or(Error::EprExhausted(user))
    }
}

/// Adds `pair`'s user qubit to the GHZ state `base`, in which the server
/// holds `hub`. The returned register lists `base`'s qubits, then the user's.
pub fn extend_epr<R: Rng + ?Sized>(base: StateRegister, hub: QubitId, pair: EprPair, rng: &mut R) -> Result<StateRegister> {
    let f = base.overlap_on(base.qubits(), &ghz_vector(base.len()))?;
    if f < 1.0 - TOLERANCE {
        return Err(Error::NotGhz(f));
    }
    base.position(hub)?;
    let (s2, j) = (pair.server, pair.user);
    let mut reg = base.compose(pair.isolate()?)?;
    reg.apply_controlled(hub, s2, ControlledOp::C0)?;
    if reg.measure_z(s2, rng)? {
        reg.apply_pauli(j, PauliOp::X)?;
    }
    reg.discard(s2)?;
    Ok(reg)
}

/// One GHZ state shared by the server and every listed user.
#[derive(Clone, Debug)]
pub struct GhzAllocation {
    pub index: usize,
    pub server: QubitId,
    pub users: Vec<(PartyId, QubitId)>,
    /// Ordered `(server, users…)`.
    pub register: StateRegister,
}

impl GhzAllocation {
    pub fn qubit_of(&self, party: PartyId) -> Option<QubitId> {
        if party == PartyId::Server {
            return Some(self.server);
        }
        self.users.iter().find(|(p, _)| *p == party).map(|&(_, q)| q)
    }
}

/// Builds an `(N+1)`-qubit GHZ state from one retained pair per user.
pub fn allocate_ghz<R: Rng + ?Sized>(
    inventory: &mut EprInventory,
    users: &[PartyId],
    index: usize,
    rng: &mut R,
) -> Result<GhzAllocation> {
    let Some(&first) = users.first() else {
        return Err(Error::TooFewUsers(0));
    };
    for &u in users {
        inventory.ensure(u)?;
    }
    let p0 = inventory.take(first)?;
    let (hub, j0) = (p0.server, p0.user);
    let mut reg = p0.isolate()?;
    let mut qubits = vec![(first, j0)];
    for &u in &users[1..] {
        let pair = inventory.take(u)?;
        qubits.push((u, pair.user));
        reg = extend_epr(reg, hub, pair, rng)?;
    }
    let f = reg.overlap_on(reg.qubits(), &ghz_vector(reg.len()))?;
    if f < 1.0 - TOLERANCE {
        return Err(Error::NotGhz(f));
    }
    Ok(GhzAllocation { index, server: hub, users: qubits, register: reg })
}
