use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use rand::Rng;

use super::{c, uniform, QubitId, StateRegister, FRAC_1_SQRT_2};
use crate::{Error, Result, TOLERANCE};

/// Outcome of an X-basis measurement, also the relative sign of a GHZ
/// basis state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Sign {
    Plus,
    Minus,
}

pub type XOutcome = Sign;

impl Sign {
    pub fn from_bit(minus: bool) -> Self {
        if minus {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn flipped(self) -> Self {
        Sign::from_bit(!self.is_minus())
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellOutcome {
    /// (|00⟩ + |11⟩)/√2
    PhiPlus,
    /// (|00⟩ − |11⟩)/√2
    PhiMinus,
    /// (|01⟩ + |10⟩)/√2
    PsiPlus,
    /// (|01⟩ − |10⟩)/√2
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] =
        [BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus, BellOutcome::PsiMinus];

    /// Position in [`Basis::bell`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_ghz(self) -> GhzOutcome {
        GhzOutcome::from_index(2, self.index())
    }
}

impl From<GhzOutcome> for BellOutcome {
    fn from(g: GhzOutcome) -> Self {
        debug_assert_eq!(g.width(), 2);
        BellOutcome::ALL[g.index() & 3]
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.as_ghz(), f)
    }
}

/// GHZ-basis state `(|x⟩ ± |x̄⟩)/√2` over `width` qubits, with `x[0] = 0`.
///
/// `pattern` holds `x` big-endian, so it is always below `2^(width-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GhzOutcome {
    width: u8,
    pattern: u32,
    sign: Sign,
}

impl GhzOutcome {
    pub fn new(width: usize, pattern: u32, sign: Sign) -> Result<Self> {
        if width < 2 {
            return Err(Error::GhzTooSmall(width));
        }
        if width > 31 || pattern >= 1 << (width - 1) {
            return Err(Error::OutOfRange { name: "ghz pattern", value: pattern as f64 });
        }
        Ok(Self { width: width as u8, pattern, sign })
    }

    /// Inverse of [`GhzOutcome::index`].
    pub fn from_index(width: usize, index: usize) -> Self {
        Self { width: width as u8, pattern: (index >> 1) as u32, sign: Sign::from_bit(index & 1 == 1) }
    }

    /// Position in [`Basis::ghz`]: `2·pattern + sign`.
    pub fn index(&self) -> usize {
        (self.pattern as usize) << 1 | self.sign.is_minus() as usize
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn pattern(&self) -> u32 {
        self.pattern
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Bit `k` of `x`, counted from the first measured qubit.
    pub fn pattern_bit(&self, k: usize) -> bool {
        self.pattern >> (self.width() - 1 - k) & 1 == 1
    }

    /// Conventional name for two- and three-qubit outcomes: `Phi`/`psi` for
    /// Bell patterns 00/01, and `Psi`/`psi`/`phi`/`varphi` for patterns
    /// 000/011/010/001.
    pub fn glyph(&self) -> Option<&'static str> {
        match (self.width, self.pattern) {
            (2, 0) => Some("Phi"),
            (2, 1) => Some("psi"),
            (3, 0b000) => Some("Psi"),
            (3, 0b011) => Some("psi"),
            (3, 0b010) => Some("phi"),
            (3, 0b001) => Some("varphi"),
            _ => None,
        }
    }

    /// Inverse of [`GhzOutcome::glyph`] plus sign.
    pub fn from_glyph(width: usize, glyph: &str, sign: Sign) -> Option<Self> {
        let pattern = match (width, glyph) {
            (2, "Phi") => 0,
            (2, "psi") => 1,
            (3, "Psi") => 0b000,
            (3, "psi") => 0b011,
            (3, "phi") => 0b010,
            (3, "varphi") => 0b001,
            _ => return None,
        };
        Some(Self { width: width as u8, pattern, sign })
    }

    pub fn all(width: usize) -> impl Iterator<Item = GhzOutcome> {
        (0..1usize << width).map(move |i| GhzOutcome::from_index(width, i))
    }
}

impl fmt::Display for GhzOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.width() {
            f.write_str(if self.pattern_bit(k) { "1" } else { "0" })?;
        }
        write!(f, "{}", self.sign)
    }
}

/// Orthonormal measurement basis over `width` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    width: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl Basis {
    pub fn computational(width: usize) -> Self {
        let dim = 1usize << width;
        let vectors = (0..dim)
            .map(|k| {
                let mut v = vec![c(0.0, 0.0); dim];
                v[k] = c(1.0, 0.0);
                v
            })
            .collect();
        Self { width, vectors }
    }

    pub fn z() -> Self {
        Self::computational(1)
    }

    /// `|+⟩`, `|−⟩` in that order.
    pub fn x() -> Self {
        let h = FRAC_1_SQRT_2;
        Self { width: 1, vectors: vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]] }
    }

    /// Ordered as [`BellOutcome::ALL`].
    pub fn bell() -> Self {
        Self::ghz(2)
    }

    /// Ordered by [`GhzOutcome::index`].
    pub fn ghz(width: usize) -> Self {
        let dim = 1usize << width;
        let full = dim - 1;
        let h = FRAC_1_SQRT_2;
        let vectors = (0..dim)
            .map(|k| {
                let o = GhzOutcome::from_index(width, k);
                let x = o.pattern as usize;
                let mut v = vec![c(0.0, 0.0); dim];
                v[x] = c(h, 0.0);
                v[full ^ x] = c(if o.sign.is_minus() { -h } else { h }, 0.0);
                v
            })
            .collect();
        Self { width, vectors }
    }

    /// Product basis; outcome `(i, j)` sits at `i * other.len() + j`.
    pub fn tensor(&self, other: &Basis) -> Basis {
        let mut vectors = Vec::with_capacity(self.len() * other.len());
        for a in &self.vectors {
            for b in &other.vectors {
                vectors.push(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect());
            }
        }
        Basis { width: self.width + other.width, vectors }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }
}

struct Split {
    sub: Vec<usize>,
    rest: Vec<usize>,
    rest_dim: usize,
}

impl StateRegister {
    fn split(&self, qs: &[QubitId]) -> Result<Split> {
        let n = self.len();
        let mut pos = Vec::with_capacity(qs.len());
        for (k, &q) in qs.iter().enumerate() {
            if qs[..k].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
            pos.push(n - 1 - self.position(q)?);
        }
        let others: Vec<usize> = (0..n).rev().filter(|b| !pos.contains(b)).collect();
        let dim = 1usize << n;
        let mut sub = Vec::with_capacity(dim);
        let mut rest = Vec::with_capacity(dim);
        for i in 0..dim {
            let s = pos.iter().fold(0, |acc, &b| acc << 1 | (i >> b & 1));
            let r = others.iter().fold(0, |acc, &b| acc << 1 | (i >> b & 1));
            sub.push(s);
            rest.push(r);
        }
        Ok(Split { sub, rest, rest_dim: 1 << others.len() })
    }

    /// `⟨b_k|ψ⟩` as a vector over the unmeasured qubits, for every basis
    /// vector `b_k`. Unmeasured qubits keep their relative order.
    pub fn projections(&self, qs: &[QubitId], basis: &Basis) -> Result<Vec<Vec<Complex64>>> {
        if basis.width() != qs.len() {
            return Err(Error::BasisWidth { basis: basis.width(), qubits: qs.len() });
        }
        let split = self.split(qs)?;
        let mut out = vec![vec![c(0.0, 0.0); split.rest_dim]; basis.len()];
        for (i, a) in self.amplitudes().iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let (s, r) = (split.sub[i], split.rest[i]);
            for (k, v) in basis.vectors().iter().enumerate() {
                out[k][r] += v[s].conj() * a;
            }
        }
        Ok(out)
    }

    /// Born-rule probability of each basis outcome.
    pub fn outcome_probabilities(&self, qs: &[QubitId], basis: &Basis) -> Result<Vec<f64>> {
        Ok(self
            .projections(qs, basis)?
            .iter()
            .map(|p| p.iter().map(|a| a.norm_sqr()).sum())
            .collect())
    }

    /// Projects onto basis vector `outcome` and renormalizes. Returns the
    /// probability of that outcome.
    pub fn collapse(&mut self, qs: &[QubitId], basis: &Basis, outcome: usize) -> Result<f64> {
        let proj = self.projections(qs, basis)?;
        let p: f64 = proj[outcome].iter().map(|a| a.norm_sqr()).sum();
        if p < TOLERANCE * TOLERANCE {
            return Err(Error::NotNormalized(p));
        }
        self.apply_collapse(qs, basis, outcome, &proj[outcome], p)?;
        Ok(p)
    }

    fn apply_collapse(
        &mut self,
        qs: &[QubitId],
        basis: &Basis,
        outcome: usize,
        proj: &[Complex64],
        p: f64,
    ) -> Result<()> {
        let split = self.split(qs)?;
        let scale = 1.0 / libm::sqrt(p);
        let v = &basis.vectors()[outcome];
        for (i, a) in self.amps_mut().iter_mut().enumerate() {
            *a = v[split.sub[i]] * proj[split.rest[i]] * scale;
        }
        Ok(())
    }

    /// Samples an outcome with a single uniform draw and collapses.
    pub fn measure_in<R: Rng + ?Sized>(&mut self, qs: &[QubitId], basis: &Basis, rng: &mut R) -> Result<usize> {
        let proj = self.projections(qs, basis)?;
        let probs: Vec<f64> = proj.iter().map(|p| p.iter().map(|a| a.norm_sqr()).sum()).collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized(total));
        }
        let draw = uniform(rng) * total;
        let mut acc = 0.0;
        let mut chosen = None;
        for (k, &p) in probs.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            acc += p;
            chosen = Some(k);
            if draw < acc {
                break;
            }
        }
        let k = chosen.ok_or(Error::NotNormalized(total))?;
        self.apply_collapse(qs, basis, k, &proj[k], probs[k])?;
        Ok(k)
    }

    /// `⟨t|ρ|t⟩` where `ρ` is the reduced state of `qs`; equals the
    /// fidelity with `|t⟩` whether or not the rest of the register is
    /// entangled with `qs`.
    pub fn overlap_on(&self, qs: &[QubitId], target: &[Complex64]) -> Result<f64> {
        if target.len() != 1usize << qs.len() {
            return Err(Error::AmplitudeLength { qubits: qs.len(), got: target.len() });
        }
        let single = Basis { width: qs.len(), vectors: vec![target.to_vec()] };
        Ok(self.outcome_probabilities(qs, &single)?[0])
    }

    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: QubitId, rng: &mut R) -> Result<bool> {
        Ok(self.measure_in(&[q], &Basis::z(), rng)? == 1)
    }

    pub fn measure_x<R: Rng + ?Sized>(&mut self, q: QubitId, rng: &mut R) -> Result<XOutcome> {
        Ok(Sign::from_bit(self.measure_in(&[q], &Basis::x(), rng)? == 1))
    }

    pub fn measure_bell<R: Rng + ?Sized>(&mut self, q1: QubitId, q2: QubitId, rng: &mut R) -> Result<BellOutcome> {
        let k = self.measure_in(&[q1, q2], &Basis::bell(), rng)?;
        Ok(BellOutcome::ALL[k])
    }

    /// Projective measurement in the complete GHZ basis of `qs`.
    pub fn measure_ghz<R: Rng + ?Sized>(&mut self, qs: &[QubitId], rng: &mut R) -> Result<GhzOutcome> {
        if qs.len() < 2 {
            return Err(Error::GhzTooSmall(qs.len()));
        }
        let k = self.measure_in(qs, &Basis::ghz(qs.len()), rng)?;
        Ok(GhzOutcome::from_index(qs.len(), k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{PartyId, PauliOp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ids(n: u32) -> Vec<QubitId> {
        (0..n).map(|index| QubitId { owner: PartyId::User(1), index }).collect()
    }

    fn plus(q: QubitId) -> StateRegister {
        let h = FRAC_1_SQRT_2;
        StateRegister::from_amplitudes(vec![q], vec![c(h, 0.0), c(h, 0.0)]).unwrap()
    }

    #[test]
    fn definite_z_outcome() {
        let q = ids(1)[0];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let mut r = StateRegister::bit(q, true);
            assert!(r.measure_z(q, &mut rng).unwrap());
        }
    }

    #[test]
    fn plus_state_probabilities() {
        let q = ids(1)[0];
        let p = plus(q).outcome_probabilities(&[q], &Basis::z()).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let px = plus(q).outcome_probabilities(&[q], &Basis::x()).unwrap();
        assert!((px[0] - 1.0).abs() < 1e-12);
        let zero = StateRegister::bit(q, false);
        let p0 = zero.outcome_probabilities(&[q], &Basis::x()).unwrap();
        assert!((p0[0] - 0.5).abs() < 1e-12 && (p0[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bell_pair_z_outcomes_agree() {
        let q = ids(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = [0usize; 2];
        for _ in 0..200 {
            let mut r = StateRegister::bell([q[0], q[1]], BellOutcome::PhiPlus).unwrap();
            let a = r.measure_z(q[0], &mut rng).unwrap();
            let b = r.measure_z(q[1], &mut rng).unwrap();
            assert_eq!(a, b);
            seen[a as usize] += 1;
        }
        assert!(seen[0] > 50 && seen[1] > 50);
    }

    #[test]
    fn x_measurement_on_ghz_leaves_phi_pair() {
        let q = ids(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut r = StateRegister::ghz(q.clone()).unwrap();
            let o = r.measure_x(q[2], &mut rng).unwrap();
            let want = match o {
                Sign::Plus => BellOutcome::PhiPlus,
                Sign::Minus => BellOutcome::PhiMinus,
            };
            let probs = r.outcome_probabilities(&[q[0], q[1]], &Basis::bell()).unwrap();
            assert!((probs[want.index()] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_measurement_of_zero_zero() {
        let q = ids(2);
        let r = StateRegister::basis_state(q.clone(), 0).unwrap();
        let p = r.outcome_probabilities(&q, &Basis::bell()).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!((p[1] - 0.5).abs() < 1e-12);
        assert!(p[2].abs() < 1e-12 && p[3].abs() < 1e-12);
    }

    #[test]
    fn ghz_measurement_recognises_basis_states() {
        let q = ids(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut r = StateRegister::ghz(q.clone()).unwrap();
        let o = r.measure_ghz(&q, &mut rng).unwrap();
        assert_eq!((o.pattern(), o.sign()), (0, Sign::Plus));
        assert_eq!(o.glyph(), Some("Psi"));

        // (|011⟩ − |100⟩)/√2
        let h = FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0b011] = c(h, 0.0);
        amps[0b100] = c(-h, 0.0);
        let mut r = StateRegister::from_amplitudes(q.clone(), amps).unwrap();
        let o = r.measure_ghz(&q, &mut rng).unwrap();
        assert_eq!((o.pattern(), o.sign()), (0b011, Sign::Minus));
        assert_eq!(o.glyph(), Some("psi"));
        assert_eq!(o.to_string(), "011-");
    }

    #[test]
    fn y_encoded_pair_reads_psi_minus_after_plus_publication() {
        // Y on the first qubit of a three-qubit GHZ, spectator projected on |+⟩
        let q = ids(3);
        let mut r = StateRegister::ghz(q.clone()).unwrap();
        r.apply_pauli(q[0], PauliOp::Y).unwrap();
        r.collapse(&[q[2]], &Basis::x(), 0).unwrap();
        let p = r.outcome_probabilities(&[q[0], q[1]], &Basis::bell()).unwrap();
        assert!((p[BellOutcome::PsiMinus.index()] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_outcome_index_round_trip() {
        for w in 2..6 {
            for o in GhzOutcome::all(w) {
                assert_eq!(GhzOutcome::from_index(w, o.index()), o);
                assert!(!o.pattern_bit(0));
            }
        }
        assert!(GhzOutcome::new(3, 0b100, Sign::Plus).is_err());
    }

    #[test]
    fn bell_outcome_conversions() {
        for b in BellOutcome::ALL {
            assert_eq!(BellOutcome::from(b.as_ghz()), b);
        }
        assert_eq!(BellOutcome::PsiMinus.to_string(), "01-");
    }
}
