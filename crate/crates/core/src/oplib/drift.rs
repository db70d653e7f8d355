//! The drift Hamiltonian of the subsystem and its commutator action.
//!
//! In the subsystem eigenbasis the rotational Hamiltonian is diagonal with one
//! energy per level block, so `[iH₀, ·]` acts termwise:
//!
//! ```text
//! [iH₀, G_jk] = −ΔE_kj F_jk      [iH₀, F_jk] = ΔE_kj G_jk      [iH₀, D_jk] = 0
//! ```
//!
//! with `ΔE_kj = E_k − E_j` read off the level blocks. Energies are kept as
//! exact rationals so the proof executor never touches floating point.

use num_traits::Signed;

use crate::exact::Rational;

use super::operator::ExactOperator;
use super::pauli::{Block, Kind, PauliElement, StateIndex};
use super::{j_from_dim, OperatorError};

/// Exact block energies `(E_τ, E_τ′, E_τ″)` of the three levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DriftSpec {
    e_tau: Rational,
    e_tau_p: Rational,
    e_tau_pp: Rational,
}

impl DriftSpec {
    /// Requires pairwise distinct energies with distinct nonzero transition
    /// frequencies `ω₁ = |E_τ′ − E_τ|` and `ω₂ = |E_τ″ − E_τ|`.
    pub fn new(
        e_tau: Rational,
        e_tau_p: Rational,
        e_tau_pp: Rational,
    ) -> Result<Self, OperatorError> {
        let w1 = (&e_tau_p - &e_tau).abs();
        let w2 = (&e_tau_pp - &e_tau).abs();
        use num_traits::Zero;
        if e_tau == e_tau_p || e_tau == e_tau_pp || e_tau_p == e_tau_pp {
            return Err(OperatorError::BadDrift);
        }
        if w1.is_zero() || w2.is_zero() || w1 == w2 {
            return Err(OperatorError::BadDrift);
        }
        Ok(Self { e_tau, e_tau_p, e_tau_pp })
    }

    /// Default energies for numerical and proof runs: `E_τ = 0`, `E_τ′ = 1`,
    /// and an irrational-like `E_τ″` rationalized at 1e−9 so that `ω₁` and
    /// `ω₂` are incommensurate for all practical purposes.
    pub fn default_spacing() -> Self {
        Self::new(
            Rational::from_integer(0.into()),
            Rational::from_integer(1.into()),
            Rational::new(1_414_213_562i64.into(), 1_000_000_000i64.into()),
        )
        .expect("default energies are valid")
    }

    pub fn energy(&self, block: Block) -> &Rational {
        match block {
            Block::Tau => &self.e_tau,
            Block::TauPrime => &self.e_tau_p,
            Block::TauDoublePrime => &self.e_tau_pp,
        }
    }

    pub fn omega1(&self) -> Rational {
        (&self.e_tau_p - &self.e_tau).abs()
    }

    pub fn omega2(&self) -> Rational {
        (&self.e_tau_pp - &self.e_tau).abs()
    }

    /// True when the lower level really is lowest, which is what the
    /// circular-combination identities assume.
    pub fn tau_is_lowest(&self) -> bool {
        self.e_tau < self.e_tau_p && self.e_tau < self.e_tau_pp
    }

    /// Energies as floats `(E_τ, E_τ′, E_τ″)` for the numerical layer.
    pub fn energies_f64(&self) -> [f64; 3] {
        use num_traits::ToPrimitive;
        [
            self.e_tau.to_f64().unwrap(),
            self.e_tau_p.to_f64().unwrap(),
            self.e_tau_pp.to_f64().unwrap(),
        ]
    }

    /// Exact `[iH₀, a]`.
    pub fn commute_drift(&self, a: &ExactOperator) -> ExactOperator {
        let j = j_from_dim(a.dim()).expect("operator dimension is 6J+7");
        let mut out = ExactOperator::zero(a.dim());
        for (elem, coeff) in a.terms() {
            let block_of = |flat: u32| {
                StateIndex::from_flat(j, flat)
                    .expect("term endpoints are in range")
                    .block
            };
            let delta =
                self.energy(block_of(elem.k)).clone() - self.energy(block_of(elem.j));
            use num_traits::Zero;
            if delta.is_zero() {
                continue;
            }
            match elem.kind {
                Kind::G => {
                    // [iH₀, G_jk] = −ΔE_kj F_jk
                    let (f, sign) = PauliElement::canonical(Kind::F, elem.j, elem.k)
                        .expect("distinct endpoints");
                    let scale = -delta * crate::exact::rational_from_i64(sign);
                    out.add_term(f, coeff.scaled(&scale));
                }
                Kind::F => {
                    // [iH₀, F_jk] = ΔE_kj G_jk
                    let (g, sign) = PauliElement::canonical(Kind::G, elem.j, elem.k)
                        .expect("distinct endpoints");
                    let scale = delta * crate::exact::rational_from_i64(sign);
                    out.add_term(g, coeff.scaled(&scale));
                }
                Kind::D => {}
            }
        }
        out
    }

    /// Dense `iH₀` with the mean energy subtracted, the traceless drift
    /// generator used by the numerical closure.
    pub fn drift_dense_traceless(&self, j: u32) -> nalgebra::DMatrix<num_complex::Complex64> {
        use num_complex::Complex64;
        let n = super::subsystem_dim(j) as usize;
        let [et, ep, epp] = self.energies_f64();
        let mut diag = Vec::with_capacity(n);
        for flat in 0..n {
            let s = StateIndex::from_flat(j, flat as u32).unwrap();
            diag.push(match s.block {
                Block::Tau => et,
                Block::TauPrime => ep,
                Block::TauDoublePrime => epp,
            });
        }
        let mean = diag.iter().sum::<f64>() / n as f64;
        nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            diag.into_iter().map(|e| Complex64::new(0.0, e - mean)),
        ))
    }
}

/// Divides an operator by an exact rational frequency; used for the
/// normalization `[iH₀, ·]/ω`.
pub fn div_by_omega(op: &ExactOperator, omega: &Rational) -> ExactOperator {
    op.scaled_rational(&omega.clone().recip())
}

impl DriftSpec {
    /// `[iH₀, a]/ω₁` — the ladder map used by the isolation machinery.
    pub fn ladder_map(&self, a: &ExactOperator) -> ExactOperator {
        div_by_omega(&self.commute_drift(a), &self.omega1())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rational_from_i64 as rat, RadicalNumber};

    fn default_drift() -> DriftSpec {
        DriftSpec::new(rat(0), rat(2), rat(5)).unwrap()
    }

    fn g_tau_taup(j: u32, m: i64, mp: i64) -> PauliElement {
        let a = StateIndex::new(Block::Tau, m);
        let b = StateIndex::new(Block::TauPrime, mp);
        PauliElement::from_states(Kind::G, j, a, b).unwrap().0
    }

    #[test]
    fn g_maps_to_f_with_level_spacing() {
        let j = 1;
        let drift = default_drift();
        let g = g_tau_taup(j, 0, 0);
        let op = ExactOperator::single(13, g, RadicalNumber::one());
        let out = drift.commute_drift(&op);
        let (elem, coeff) = out.as_single().unwrap();
        assert_eq!(elem.kind, Kind::F);
        assert_eq!((elem.j, elem.k), (g.j, g.k));
        // −(E_τ′ − E_τ) = −2
        assert_eq!(coeff.as_rational(), Some(rat(-2)));
    }

    #[test]
    fn diagonal_kind_is_annihilated() {
        let drift = default_drift();
        let (d, _) = PauliElement::canonical(Kind::D, 0, 3).unwrap();
        let op = ExactOperator::single(7, d, RadicalNumber::one());
        assert!(drift.commute_drift(&op).is_zero());
    }

    #[test]
    fn double_action_scales_by_minus_spacing_squared() {
        let j = 1;
        let drift = default_drift();
        let op = ExactOperator::single(13, g_tau_taup(j, 1, 2), RadicalNumber::one());
        let twice = drift.commute_drift(&drift.commute_drift(&op));
        assert_eq!(twice, op.scaled_rational(&rat(-4)));
    }

    #[test]
    fn invalid_drifts_rejected() {
        assert!(DriftSpec::new(rat(0), rat(0), rat(1)).is_err());
        // ω₁ = ω₂
        assert!(DriftSpec::new(rat(0), rat(1), rat(-1)).is_err());
        assert!(DriftSpec::new(rat(0), rat(1), rat(2)).is_ok());
    }

    #[test]
    fn within_block_spacing_is_zero() {
        let drift = default_drift();
        // both endpoints in the τ′ block of J=1 (flats 3..=7)
        let (g, _) = PauliElement::canonical(Kind::G, 3, 4).unwrap();
        let op = ExactOperator::single(13, g, RadicalNumber::one());
        assert!(drift.commute_drift(&op).is_zero());
    }
}
