use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::{inner, random_orthonormal_pair};
use crate::comms::Leg;
use crate::qcore::{c, Matrix4, PartyId, QubitAllocator, QubitId, StateRegister};
use crate::{Error, Result, TOLERANCE};

/// Attacker's map on the in-flight authentication particle `u` and a fresh
/// ancilla `a`: `|0_u⟩ → α₀|00⟩ + β₀|01⟩ + γ₀|10⟩ + δ₀|11⟩`, likewise for
/// `|1_u⟩` with index 1, both over `(u, a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MasqueradeParams {
    zero: [Complex64; 4],
    one: [Complex64; 4],
}

fn sq(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

impl MasqueradeParams {
    /// `zero = [α₀, β₀, γ₀, δ₀]`, `one = [α₁, β₁, γ₁, δ₁]`.
    pub fn new(zero: [Complex64; 4], one: [Complex64; 4]) -> Result<Self> {
        for v in [&zero, &one] {
            let n = sq(v);
            if (n - 1.0).abs() > TOLERANCE {
                return Err(Error::NotNormalizedParams(n));
            }
        }
        Ok(Self { zero, one })
    }

    /// `α₀ = δ₁ = 1`
    pub fn identity_like() -> Self {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        Self { zero: [o, z, z, z], one: [z, z, z, o] }
    }

    /// `γ₀ = β₁ = 1`
    pub fn swap_like() -> Self {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        Self { zero: [z, z, o, z], one: [z, o, z, z] }
    }

    /// Haar-random isometry from `u` into `(u, a)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (a, b) = random_orthonormal_pair(4, rng);
        let arr = |v: Vec<Complex64>| [v[0], v[1], v[2], v[3]];
        Self { zero: arr(a), one: arr(b) }
    }

    pub fn zero(&self) -> &[Complex64; 4] {
        &self.zero
    }

    pub fn one(&self) -> &[Complex64; 4] {
        &self.one
    }

    /// Local matrix on `(u, a)`; only the `a = 0` columns matter.
    pub fn matrix(&self) -> Matrix4 {
        let mut m = [[c(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            m[r][0] = self.zero[r];
            m[r][2] = self.one[r];
        }
        m
    }

    /// Rejection probability for key pair `(0, 0)`.
    pub fn detection_00(&self) -> f64 {
        let [_, b0, _, d0] = self.zero;
        let [a1, _, g1, _] = self.one;
        0.5 * (a1.norm_sqr() + g1.norm_sqr() + b0.norm_sqr() + d0.norm_sqr())
    }

    /// Rejection probability for key pair `(0, 1)`.
    pub fn detection_01(&self) -> f64 {
        let [a0, _, g0, _] = self.zero;
        let [_, b1, _, d1] = self.one;
        0.5 * (a0.norm_sqr() + g0.norm_sqr() + b1.norm_sqr() + d1.norm_sqr())
    }

    /// Probability that the substituted particle reads 1 after the server's
    /// X-basis controlled-NOT.
    fn c1_flip(&self) -> f64 {
        let (z, o) = (&self.zero, &self.one);
        let on_a1 = inner(&[z[1], z[3]], &[o[1], o[3]]);
        let on_a0 = inner(&[z[0], z[2]], &[o[0], o[2]]);
        0.5 + 0.5 * (on_a1 - on_a0).re
    }

    /// Rejection probability for key pair `(1, 0)`.
    pub fn detection_10(&self) -> f64 {
        1.0 - self.c1_flip()
    }

    /// Rejection probability for key pair `(1, 1)`.
    pub fn detection_11(&self) -> f64 {
        self.c1_flip()
    }

    pub fn detection(&self, key_pair: (bool, bool)) -> f64 {
        match key_pair {
            (false, false) => self.detection_00(),
            (false, true) => self.detection_01(),
            (true, false) => self.detection_10(),
            (true, true) => self.detection_11(),
        }
    }

    /// Mean rejection probability over the four key pairs.
    pub fn total(&self) -> f64 {
        0.25 * (self.detection_00() + self.detection_01() + self.detection_10() + self.detection_11())
    }
}

/// Captures `u` on its way to the user, entangles it with an ancilla, and
/// returns the ancilla to the server in place of the user's reply.
#[derive(Clone, Debug)]
pub struct MasqueradeTap {
    params: MasqueradeParams,
    held: Option<QubitId>,
}

impl MasqueradeTap {
    pub fn new(params: MasqueradeParams) -> Self {
        Self { params, held: None }
    }

    pub fn params(&self) -> &MasqueradeParams {
        &self.params
    }

    pub(crate) fn on_transit(
        &mut self,
        leg: Leg,
        qubit: Option<QubitId>,
        reg: &mut StateRegister,
        alloc: &mut QubitAllocator,
    ) -> Result<Option<QubitId>> {
        match (leg, qubit) {
            (Leg::Outbound, Some(u)) => {
                let a = alloc.fresh(PartyId::Adversary);
                reg.adjoin(a, false)?;
                reg.apply_pair(u, a, &self.params.matrix())?;
                let n = reg.norm_sqr();
                if (n - 1.0).abs() > 1e-6 {
                    return Err(Error::NonPhysicalMap(n));
                }
                self.held = Some(a);
                Ok(None)
            }
            (Leg::Return, _) => Ok(self.held.take()),
            (Leg::Outbound, None) => Ok(None),
        }
    }
}
