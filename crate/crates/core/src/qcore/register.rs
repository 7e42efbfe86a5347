use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::gates::{ControlledOp, Matrix2, Matrix4, PauliOp};
use crate::{Error, Result, TOLERANCE};

/// Largest register the engine will build unless told otherwise.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// A protocol participant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartyId {
    Server,
    /// Users are numbered from 1; user `n_users` is the receiver.
    User(u16),
    Adversary,
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartyId::Server => f.write_str("server"),
            PartyId::User(n) => write!(f, "u{n}"),
            PartyId::Adversary => f.write_str("adversary"),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for PartyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Label of one physical qubit. `index` is unique within a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitId {
    pub owner: PartyId,
    pub index: u32,
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.owner, self.index)
    }
}

/// Hands out session-unique qubit labels.
#[derive(Clone, Debug, Default)]
pub struct QubitAllocator {
    next: u32,
}

impl QubitAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, owner: PartyId) -> QubitId {
        let id = QubitId { owner, index: self.next };
        self.next += 1;
        id
    }

    pub fn issued(&self) -> u32 {
        self.next
    }
}

/// Pure state of an ordered list of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateRegister {
    qubits: Vec<QubitId>,
    amps: Vec<Complex64>,
    max_qubits: usize,
}

impl StateRegister {
    /// Computational basis state `|index⟩` over `qubits`.
    pub fn basis_state(qubits: Vec<QubitId>, index: usize) -> Result<Self> {
        check_ids(&qubits, DEFAULT_MAX_QUBITS)?;
        let dim = 1usize << qubits.len();
        if index >= dim {
            return Err(Error::AmplitudeLength { qubits: qubits.len(), got: index + 1 });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amps, max_qubits: DEFAULT_MAX_QUBITS })
    }

    /// Single qubit in `|bit⟩`.
    pub fn bit(qubit: QubitId, bit: bool) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 2];
        amps[bit as usize] = Complex64::new(1.0, 0.0);
        Self { qubits: vec![qubit], amps, max_qubits: DEFAULT_MAX_QUBITS }
    }

    /// Wraps an explicit amplitude vector. The vector must be normalized.
    pub fn from_amplitudes(qubits: Vec<QubitId>, amps: Vec<Complex64>) -> Result<Self> {
        check_ids(&qubits, DEFAULT_MAX_QUBITS)?;
        if amps.len() != 1usize << qubits.len() {
            return Err(Error::AmplitudeLength { qubits: qubits.len(), got: amps.len() });
        }
        let reg = Self { qubits, amps, max_qubits: DEFAULT_MAX_QUBITS };
        let n = reg.norm_sqr();
        if (n - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(reg)
    }

    /// Bell state over two fresh qubits.
    pub fn bell(ids: [QubitId; 2], which: super::BellOutcome) -> Result<Self> {
        let basis = super::Basis::bell();
        Self::from_amplitudes(ids.to_vec(), basis.vectors()[which.index()].clone())
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` over the given qubits.
    pub fn ghz(ids: Vec<QubitId>) -> Result<Self> {
        if ids.len() < 2 {
            return Err(Error::GhzTooSmall(ids.len()));
        }
        check_ids(&ids, DEFAULT_MAX_QUBITS)?;
        let dim = 1usize << ids.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::new(super::FRAC_1_SQRT_2, 0.0);
        amps[dim - 1] = Complex64::new(super::FRAC_1_SQRT_2, 0.0);
        Ok(Self { qubits: ids, amps, max_qubits: DEFAULT_MAX_QUBITS })
    }

    pub fn set_max_qubits(&mut self, cap: usize) {
        self.max_qubits = cap;
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn contains(&self, q: QubitId) -> bool {
        self.qubits.contains(&q)
    }

    pub fn position(&self, q: QubitId) -> Result<usize> {
        self.qubits.iter().position(|&x| x == q).ok_or(Error::UnknownQubit(q))
    }

    pub(crate) fn mask(&self, q: QubitId) -> Result<usize> {
        let p = self.position(q)?;
        Ok(1usize << (self.qubits.len() - 1 - p))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Applies an arbitrary 2×2 matrix to one qubit.
    pub fn apply_single(&mut self, q: QubitId, m: &Matrix2) -> Result<()> {
        let mask = self.mask(q)?;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, q: QubitId, op: PauliOp) -> Result<()> {
        if op == PauliOp::I {
            // still validate the label
            self.position(q)?;
            return Ok(());
        }
        self.apply_single(q, &op.matrix())
    }

    /// Applies a 4×4 matrix to the ordered pair `(first, second)`; the local
    /// index is `2·bit(first) + bit(second)`. The matrix need not be unitary.
    pub fn apply_pair(&mut self, first: QubitId, second: QubitId, m: &Matrix4) -> Result<()> {
        if first == second {
            return Err(Error::ControlIsTarget(first));
        }
        let m1 = self.mask(first)?;
        let m2 = self.mask(second)?;
        for i in 0..self.amps.len() {
            if i & (m1 | m2) != 0 {
                continue;
            }
            let idx = [i, i | m2, i | m1, i | m1 | m2];
            let v = idx.map(|k| self.amps[k]);
            for (r, &k) in idx.iter().enumerate() {
                self.amps[k] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
            }
        }
        Ok(())
    }

    pub fn apply_controlled(&mut self, control: QubitId, target: QubitId, op: ControlledOp) -> Result<()> {
        self.apply_pair(control, target, &op.matrix())
    }

    /// Tensor product; the result lists `self`'s qubits first.
    pub fn compose(mut self, other: StateRegister) -> Result<StateRegister> {
        self.absorb(other)?;
        Ok(self)
    }

    /// In-place [`StateRegister::compose`].
    pub fn absorb(&mut self, other: StateRegister) -> Result<()> {
        if let Some(&dup) = other.qubits.iter().find(|q| self.qubits.contains(q)) {
            return Err(Error::DuplicateQubit(dup));
        }
        let cap = self.max_qubits.min(other.max_qubits);
        let n = self.qubits.len() + other.qubits.len();
        if n > cap {
            return Err(Error::TooManyQubits { requested: n, cap });
        }
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        self.qubits.extend_from_slice(&other.qubits);
        self.amps = amps;
        self.max_qubits = cap;
        Ok(())
    }

    /// Appends a fresh qubit in `|bit⟩`.
    pub fn adjoin(&mut self, q: QubitId, bit: bool) -> Result<()> {
        self.absorb(StateRegister::bit(q, bit))
    }

    /// Drops a qubit that sits in a definite computational state, e.g. right
    /// after a Z measurement.
    pub fn discard(&mut self, q: QubitId) -> Result<bool> {
        let mask = self.mask(q)?;
        let weight_one: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let total = self.norm_sqr();
        let bit = if weight_one < TOLERANCE {
            false
        } else if (weight_one - total).abs() < TOLERANCE {
            true
        } else {
            return Err(Error::NotSeparable(q));
        };
        let keep = if bit { mask } else { 0 };
        let amps: Vec<Complex64> = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == keep)
            .map(|(_, a)| *a)
            .collect();
        let pos = self.position(q)?;
        self.qubits.remove(pos);
        self.amps = amps;
        Ok(bit)
    }

    /// Same state with the qubit list permuted into `order`.
    pub fn reordered(&self, order: &[QubitId]) -> Result<StateRegister> {
        if order.len() != self.qubits.len() {
            return Err(Error::AmplitudeLength { qubits: order.len(), got: self.amps.len() });
        }
        check_ids(order, usize::MAX)?;
        let n = order.len();
        // source bit position for each target bit
        let src: Vec<usize> = order
            .iter()
            .map(|&q| self.position(q).map(|p| n - 1 - p))
            .collect::<Result<_>>()?;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (j, slot) in amps.iter_mut().enumerate() {
            let mut i = 0usize;
            for (t, &s) in src.iter().enumerate() {
                if j >> (n - 1 - t) & 1 == 1 {
                    i |= 1 << s;
                }
            }
            *slot = self.amps[i];
        }
        Ok(StateRegister { qubits: order.to_vec(), amps, max_qubits: self.max_qubits })
    }

    /// `⟨self|other⟩` after aligning `other` to this register's qubit order.
    pub fn inner(&self, other: &StateRegister) -> Result<Complex64> {
        let aligned = other.reordered(&self.qubits)?;
        Ok(self.amps.iter().zip(&aligned.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase and qubit order.
    pub fn fidelity(&self, other: &StateRegister) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// True when the two states agree up to a global phase.
    pub fn approx_eq_up_to_phase(&self, other: &StateRegister, tol: f64) -> bool {
        match self.inner(other) {
            Ok(ip) => {
                let n = libm::sqrt(ip.norm_sqr());
                if n < TOLERANCE {
                    return false;
                }
                let phase = ip / n;
                let aligned = match other.reordered(&self.qubits) {
                    Ok(a) => a,
                    Err(_) => return false,
                };
                self.amps
                    .iter()
                    .zip(&aligned.amps)
                    .all(|(a, b)| (a * phase - b).norm_sqr() <= tol * tol)
            }
            Err(_) => false,
        }
    }
}

fn check_ids(ids: &[QubitId], cap: usize) -> Result<()> {
    if ids.len() > cap {
        return Err(Error::TooManyQubits { requested: ids.len(), cap });
    }
    for (k, q) in ids.iter().enumerate() {
        if ids[..k].contains(q) {
            return Err(Error::DuplicateQubit(*q));
        }
    }
    Ok(())
}
