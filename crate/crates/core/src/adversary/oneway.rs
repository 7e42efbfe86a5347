use alloc::vec::Vec;

use rand::Rng;

use crate::comms::Leg;
use crate::qcore::{holevo_chi, ControlledOp, DensityMatrix, PartyId, QubitId, StateRegister, BellOutcome};
use crate::Result;

/// Reads the returning particle `n` in the Z basis and forwards it.
#[derive(Clone, Debug, Default)]
pub struct OneWayTap {
    observations: Vec<bool>,
}

impl OneWayTap {
    pub fn observations(&self) -> &[bool] {
        &self.observations
    }

    pub(crate) fn on_transit<R: Rng + ?Sized>(
        &mut self,
        leg: Leg,
        qubit: Option<QubitId>,
        reg: &mut StateRegister,
        rng: &mut R,
    ) -> Result<Option<QubitId>> {
        if let (Leg::Return, Some(n)) = (leg, qubit) {
            self.observations.push(reg.measure_z(n, rng)?);
        }
        Ok(qubit)
    }
}

#[derive(Clone, Debug)]
pub struct OneWayAnalysis {
    /// Reduced state of `n` averaged over the four key pairs.
    pub rho_n: DensityMatrix,
    /// Reduced state of `n` for key pairs 00, 01, 10, 11.
    pub rho_ni: [DensityMatrix; 4],
    /// Holevo bound in bits.
    pub chi: f64,
}

/// In-flight state `(q, u, n)` of the returning particle for one key pair.
pub fn returning_state(key_pair: (bool, bool)) -> Result<(StateRegister, QubitId)> {
    let q = QubitId { owner: PartyId::Server, index: 0 };
    let u = QubitId { owner: PartyId::Server, index: 1 };
    let n = QubitId { owner: PartyId::User(1), index: 2 };
    let (a1, a2) = key_pair;
    let mut reg = StateRegister::bell([q, u], BellOutcome::PhiPlus)?.compose(StateRegister::bit(n, a1 ^ a2))?;
    let op = if a1 { ControlledOp::C1 } else { ControlledOp::C0 };
    reg.apply_controlled(u, n, op)?;
    Ok((reg, n))
}

/// Holevo information an eavesdropper on the return leg can extract about
/// a uniformly random key pair.
pub fn holevo_one_way() -> Result<OneWayAnalysis> {
    let mut parts = Vec::with_capacity(4);
    for key in [(false, false), (false, true), (true, false), (true, true)] {
        let (reg, n) = returning_state(key)?;
        parts.push((0.25, DensityMatrix::reduced(&reg, &[n])?));
    }
    let rho_n = DensityMatrix::mixture(&parts)?;
    let chi = holevo_chi(&parts)?;
    let mut it = parts.into_iter().map(|(_, m)| m);
    let rho_ni = [(); 4].map(|_| it.next().expect("four key pairs"));
    Ok(OneWayAnalysis { rho_n, rho_ni, chi })
}
