use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::{inner, norm_sqr, random_orthonormal_pair, random_unit};
use crate::comms::{encode_symbol, DecodeTable, Leg};
use crate::qcore::{c, uniform, Basis, Matrix4, PartyId, PauliOp, QubitAllocator, QubitId, StateRegister};
use crate::{Error, Result, TOLERANCE};

/// Attacker map on an in-flight qubit and a fresh ancilla `A`:
/// `|0⟩ → α|0⟩|ε₀₀⟩ + β|1⟩|ε₀₁⟩` and `|1⟩ → β′|0⟩|ε₁₀⟩ + α′|1⟩|ε₁₁⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterceptParams {
    alpha: Complex64,
    beta: Complex64,
    alpha_p: Complex64,
    beta_p: Complex64,
    /// ε₀₀, ε₀₁, ε₁₀, ε₁₁
    eps: [[Complex64; 2]; 4],
}

fn split(v: &[Complex64]) -> (Complex64, [Complex64; 2]) {
    let n = libm::sqrt(v[0].norm_sqr() + v[1].norm_sqr());
    if n < 1e-12 {
        (c(0.0, 0.0), [c(1.0, 0.0), c(0.0, 0.0)])
    } else {
        (c(n, 0.0), [v[0] / n, v[1] / n])
    }
}

impl InterceptParams {
    pub fn new(
        alpha: Complex64,
        beta: Complex64,
        alpha_p: Complex64,
        beta_p: Complex64,
        eps: [[Complex64; 2]; 4],
    ) -> Result<Self> {
        for n in [alpha.norm_sqr() + beta.norm_sqr(), alpha_p.norm_sqr() + beta_p.norm_sqr()]
            .into_iter()
            .chain(eps.iter().map(|e| norm_sqr(e)))
        {
            if (n - 1.0).abs() > TOLERANCE {
                return Err(Error::NotNormalizedParams(n));
            }
        }
        Ok(Self { alpha, beta, alpha_p, beta_p, eps })
    }

    /// Product ancilla: nothing is disturbed, nothing is learned.
    pub fn trivial() -> Self {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        Self { alpha: o, beta: z, alpha_p: o, beta_p: z, eps: [[o, z]; 4] }
    }

    /// Copies the computational value into the ancilla.
    pub fn cnot_copy() -> Self {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        Self { alpha: o, beta: z, alpha_p: o, beta_p: z, eps: [[o, z], [o, z], [o, z], [z, o]] }
    }

    /// Random member of the which-path family: `β = β′ = 0` with
    /// `ε₀₀ ⊥ ε₁₁`, so the ancilla records the computational value exactly.
    pub fn which_path<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let phase = |rng: &mut R| {
            let t = core::f64::consts::TAU * uniform(rng);
            c(libm::cos(t), libm::sin(t))
        };
        let alpha = phase(rng);
        let alpha_p = phase(rng);
        let (e00, e11) = random_orthonormal_pair(2, rng);
        let e01 = random_unit(2, rng);
        let e10 = random_unit(2, rng);
        let z = c(0.0, 0.0);
        Self {
            alpha,
            beta: z,
            alpha_p,
            beta_p: z,
            eps: [[e00[0], e00[1]], [e01[0], e01[1]], [e10[0], e10[1]], [e11[0], e11[1]]],
        }
    }

    /// Haar-random isometry from the qubit into qubit ⊗ ancilla.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (v0, v1) = random_orthonormal_pair(4, rng);
        let (alpha, e00) = split(&v0[0..2]);
        let (beta, e01) = split(&v0[2..4]);
        let (beta_p, e10) = split(&v1[0..2]);
        let (alpha_p, e11) = split(&v1[2..4]);
        Self { alpha, beta, alpha_p, beta_p, eps: [e00, e01, e10, e11] }
    }

    /// Images of `|0⟩` and `|1⟩` over (qubit, ancilla).
    pub fn images(&self) -> ([Complex64; 4], [Complex64; 4]) {
        let [e00, e01, e10, e11] = self.eps;
        (
            [self.alpha * e00[0], self.alpha * e00[1], self.beta * e01[0], self.beta * e01[1]],
            [self.beta_p * e10[0], self.beta_p * e10[1], self.alpha_p * e11[0], self.alpha_p * e11[1]],
        )
    }

    /// True when the two images are orthogonal, i.e. the map is physical on
    /// every input.
    pub fn is_isometry(&self) -> bool {
        let (a, b) = self.images();
        inner(&a, &b).norm_sqr() < TOLERANCE * TOLERANCE
    }

    pub fn matrix(&self) -> Matrix4 {
        let (v0, v1) = self.images();
        let mut m = [[c(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            m[r][0] = v0[r];
            m[r][2] = v1[r];
        }
        m
    }
}

/// Applies the map to one sender's qubit, reads the ancilla in Z and keeps
/// the reading.
#[derive(Clone, Debug)]
pub struct InterceptTap {
    params: InterceptParams,
    observations: Vec<bool>,
}

impl InterceptTap {
    pub fn new(params: InterceptParams) -> Self {
        Self { params, observations: Vec::new() }
    }

    pub fn params(&self) -> &InterceptParams {
        &self.params
    }

    pub fn observations(&self) -> &[bool] {
        &self.observations
    }

    /// The attacker's Pauli guess for each intercepted qubit.
    pub fn guesses(&self) -> Vec<PauliOp> {
        self.observations.iter().map(|&b| guess_pauli(b)).collect()
    }

    pub(crate) fn on_transit<R: Rng + ?Sized>(
        &mut self,
        leg: Leg,
        qubit: Option<QubitId>,
        reg: &mut StateRegister,
        alloc: &mut QubitAllocator,
        rng: &mut R,
    ) -> Result<Option<QubitId>> {
        if let (Leg::Outbound, Some(q)) = (leg, qubit) {
            let a = alloc.fresh(PartyId::Adversary);
            reg.adjoin(a, false)?;
            reg.apply_pair(q, a, &self.params.matrix())?;
            let n = reg.norm_sqr();
            if (n - 1.0).abs() > 1e-6 {
                return Err(Error::NonPhysicalMap(n));
            }
            let bit = reg.measure_z(a, rng)?;
            reg.discard(a)?;
            self.observations.push(bit);
        }
        Ok(qubit)
    }
}

/// Best single-reading guess: a flipped reading suggests a bit-flipping
/// Pauli. Phase information never reaches a Z reading.
pub fn guess_pauli(observation: bool) -> PauliOp {
    if observation {
        PauliOp::X
    } else {
        PauliOp::I
    }
}

/// Exact probability that the receiver decodes a uniformly random symbol
/// wrongly when `params` act on sender `sender`'s qubit (0-based).
pub fn symbol_error_exact(params: &InterceptParams, table: &DecodeTable, sender: usize) -> Result<f64> {
    let layout = table.layout();
    let n = layout.n_users();
    if sender >= layout.senders() {
        return Err(Error::OutOfRange { name: "sender", value: sender as f64 });
    }
    let server = QubitId { owner: PartyId::Server, index: 0 };
    let users: Vec<QubitId> = (1..=n as u32).map(|k| QubitId { owner: PartyId::User(k as u16), index: k }).collect();
    let anc = QubitId { owner: PartyId::Adversary, index: n as u32 + 1 };
    let (measured, publisher) = table.mode().roles(server, &users);
    let mut qs = measured.clone();
    qs.push(publisher);
    let basis = Basis::ghz(measured.len()).tensor(&Basis::x());
    let symbols = 1u32 << layout.width();
    let mut wrong = 0.0;
    for s in 0..symbols {
        let mut all = vec![server];
        all.extend_from_slice(&users);
        let mut reg = StateRegister::ghz(all)?;
        for (k, op) in encode_symbol(layout, &layout.bits_of(s))?.into_iter().enumerate() {
            reg.apply_pauli(users[k], op)?;
        }
        reg.adjoin(anc, false)?;
        reg.apply_pair(users[sender], anc, &params.matrix())?;
        let norm = reg.norm_sqr();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::NonPhysicalMap(norm));
        }
        for (k, p) in reg.outcome_probabilities(&qs, &basis)?.into_iter().enumerate() {
            if table.decode_index(k) != Some(s) {
                wrong += p;
            }
        }
    }
    Ok(wrong / f64::from(symbols))
}
