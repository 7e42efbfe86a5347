use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::comms::Leg;
use crate::qcore::{c, Matrix4, PartyId, QubitAllocator, QubitId, StateRegister};
use crate::{Error, Result};

fn check(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_nan() || value < lo - 1e-12 || value > hi + 1e-12 {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(value.clamp(lo, hi))
}

/// Minimum detection probability `(1 − cos θ)/4` of the two-way attack.
pub fn two_way_detection(theta_eps: f64) -> Result<f64> {
    let t = check("theta_eps", theta_eps, 0.0, PI)?;
    Ok(0.25 * (1.0 - libm::cos(t)))
}

/// `sin θ = √(8T − 16T²)` on the branch `θ ∈ [0, π]`.
pub fn sin_theta_from_total(total: f64) -> Result<f64> {
    let t = check("total", total, 0.0, 0.5)?;
    Ok(libm::sqrt((8.0 * t - 16.0 * t * t).max(0.0)))
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * libm::log2(x)
    }
}

/// Joint information in bits the attacker gains at detection level `total`.
pub fn joint_info(total: f64) -> Result<f64> {
    let s = sin_theta_from_total(total)?;
    Ok(0.25 * (xlog2x(1.0 + s) + xlog2x(1.0 - s)))
}

/// Key estimation probability in its simplified closed form
/// `(sin θ (3P − 1) + 2)/8`.
pub fn estimation_prob(theta_eps: f64, p: f64) -> Result<f64> {
    let t = check("theta_eps", theta_eps, 0.0, PI)?;
    let p = check("p", p, 0.0, 1.0)?;
    Ok((libm::sin(t) * (3.0 * p - 1.0) + 2.0) / 8.0)
}

/// Key estimation probability before simplification:
/// `(1+s)/2 [P/2 + (1−P)/4] + (1−s)/2 [(1−P)/4]`, which reduces to
/// `(1 + sP)/4`. It agrees with [`estimation_prob`] only when `P = 1` or
/// `sin θ = 0`.
pub fn estimation_prob_unsimplified(theta_eps: f64, p: f64) -> Result<f64> {
    let t = check("theta_eps", theta_eps, 0.0, PI)?;
    let p = check("p", p, 0.0, 1.0)?;
    let s = libm::sin(t);
    Ok((1.0 + s) / 2.0 * (0.5 * p + 0.25 * (1.0 - p)) + (1.0 - s) / 2.0 * (0.25 * (1.0 - p)))
}

/// Maximal estimation probability `(√(8T − 16T²) + 1)/4`.
pub fn p_e_max(total: f64) -> Result<f64> {
    Ok(0.25 * (sin_theta_from_total(total)? + 1.0))
}

/// Probability of retrieving all `n` key bits, `[p_e_m (1 − T)]^(n/2)`.
/// The two factors are free inputs.
pub fn p_e_retrieve(p_e_m: f64, total: f64, n: u32) -> Result<f64> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::KeyBits(n));
    }
    let p = check("p_e_m", p_e_m, 0.0, 1.0)?;
    let t = check("total", total, 0.0, 1.0)?;
    Ok(libm::pow(p * (1.0 - t), f64::from(n / 2)))
}

/// [`p_e_retrieve`] with `p_e_m` tied to `total` through [`p_e_max`].
pub fn p_e_retrieve_physical(total: f64, n: u32) -> Result<f64> {
    p_e_retrieve(p_e_max(total)?, total, n)
}

/// Exact rejection probability of [`TwoWayTap`] for one key pair.
pub fn tap_detection(theta_eps: f64, key_pair: (bool, bool)) -> Result<f64> {
    let t = check("theta_eps", theta_eps, 0.0, PI)?;
    Ok(if key_pair.0 { 0.5 * (1.0 - libm::cos(t)) } else { 0.0 })
}

/// Representative state-level two-way attack: on the way out, `u` controls a
/// rotation by `θ` of an ancilla `ε`; on the way back, `n` controls the same
/// rotation of an ancilla `η`.
#[derive(Clone, Debug)]
pub struct TwoWayTap {
    theta: f64,
    eps: Vec<QubitId>,
    eta: Vec<QubitId>,
}

impl TwoWayTap {
    pub fn new(theta_eps: f64) -> Result<Self> {
        let theta = check("theta_eps", theta_eps, 0.0, PI)?;
        Ok(Self { theta, eps: Vec::new(), eta: Vec::new() })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn ancillas(&self) -> (&[QubitId], &[QubitId]) {
        (&self.eps, &self.eta)
    }

    fn matrix(&self) -> Matrix4 {
        let (s, co) = (libm::sin(self.theta), libm::cos(self.theta));
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        [
            [o, z, z, z],
            [z, o, z, z],
            [z, z, c(co, 0.0), c(-s, 0.0)],
            [z, z, c(s, 0.0), c(co, 0.0)],
        ]
    }

    pub(crate) fn on_transit(
        &mut self,
        leg: Leg,
        qubit: Option<QubitId>,
        reg: &mut StateRegister,
        alloc: &mut QubitAllocator,
    ) -> Result<Option<QubitId>> {
        if let Some(q) = qubit {
            let anc = alloc.fresh(PartyId::Adversary);
            reg.adjoin(anc, false)?;
            reg.apply_pair(q, anc, &self.matrix())?;
            match leg {
                Leg::Outbound => self.eps.push(anc),
                Leg::Return => self.eta.push(anc),
            }
        }
        Ok(qubit)
    }
}
