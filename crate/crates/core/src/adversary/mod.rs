//! Channel taps and the closed-form security analysis.

mod intercept;
mod masquerade;
mod oneway;
mod twoway;

pub use intercept::{guess_pauli, symbol_error_exact, InterceptParams, InterceptTap};
pub use masquerade::{MasqueradeParams, MasqueradeTap};
pub use oneway::{holevo_one_way, returning_state, OneWayAnalysis, OneWayTap};
pub use twoway::{
    estimation_prob, estimation_prob_unsimplified, joint_info, p_e_max, p_e_retrieve, p_e_retrieve_physical,
    sin_theta_from_total, tap_detection, two_way_detection, TwoWayTap,
};

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::comms::Leg;
use crate::qcore::{c, uniform, QubitAllocator, QubitId, StateRegister};
use crate::Result;

/// An adversary sitting on one channel.
#[derive(Clone, Debug)]
pub enum AttackModel {
    Masquerade(MasqueradeTap),
    OneWay(OneWayTap),
    TwoWay(TwoWayTap),
    Intercept(InterceptTap),
}

impl AttackModel {
    pub fn masquerade(params: MasqueradeParams) -> Self {
        AttackModel::Masquerade(MasqueradeTap::new(params))
    }

    pub fn one_way() -> Self {
        AttackModel::OneWay(OneWayTap::default())
    }

    pub fn two_way(theta_eps: f64) -> Result<Self> {
        Ok(AttackModel::TwoWay(TwoWayTap::new(theta_eps)?))
    }

    pub fn intercept(params: InterceptParams) -> Self {
        AttackModel::Intercept(InterceptTap::new(params))
    }

    pub fn name(&self) -> &'static str {
        match self {
            AttackModel::Masquerade(_) => "masquerade",
            AttackModel::OneWay(_) => "oneway",
            AttackModel::TwoWay(_) => "twoway",
            AttackModel::Intercept(_) => "intercept",
        }
    }

    /// Acts on whatever crosses the tapped channel and returns what the
    /// receiving endpoint actually gets.
    pub fn on_transit<R: Rng + ?Sized>(
        &mut self,
        leg: Leg,
        qubit: Option<QubitId>,
        reg: &mut StateRegister,
        alloc: &mut QubitAllocator,
        rng: &mut R,
    ) -> Result<Option<QubitId>> {
        match self {
            AttackModel::Masquerade(t) => t.on_transit(leg, qubit, reg, alloc),
            AttackModel::OneWay(t) => t.on_transit(leg, qubit, reg, rng),
            AttackModel::TwoWay(t) => t.on_transit(leg, qubit, reg, alloc),
            AttackModel::Intercept(t) => t.on_transit(leg, qubit, reg, alloc, rng),
        }
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

/// Haar-random unit vector.
pub(crate) fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| c(gaussian(rng), gaussian(rng))).collect();
    normalize(&mut v);
    v
}

/// Haar-random orthonormal pair in `dim` dimensions.
pub(crate) fn random_orthonormal_pair<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> (Vec<Complex64>, Vec<Complex64>) {
    let a = random_unit(dim, rng);
    loop {
        let mut b = random_unit(dim, rng);
        let ip = inner(&a, &b);
        for (bi, ai) in b.iter_mut().zip(&a) {
            *bi -= ai * ip;
        }
        if norm_sqr(&b) > 1e-6 {
            normalize(&mut b);
            return (a, b);
        }
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

fn normalize(v: &mut [Complex64]) {
    let n = libm::sqrt(norm_sqr(v));
    for x in v {
        *x /= n;
    }
}
