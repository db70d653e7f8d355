//! Structural drive operators: the prefactor-free anti-Hermitian interaction
//! Hamiltonians of the four resonant fields, and the circularly polarized
//! combinations built from them.
//!
//! The ladder drives couple `(J,τ,M)` to `(J+1,τ',M±1)` (frequency ω₁, x/y
//! polarization) or `(J,τ,M)` to `(J+1,τ'',M±1)` (ω₂, y polarization); the
//! z-polarized ω₂ drive conserves M. Their M-dependent coefficients are the
//! magnitudes of the corresponding Wigner 3j symbols with the global
//! M-independent factor stripped, normalized so the smallest ladder
//! coefficient is 1:
//!
//! ```text
//! ascending  M → M+1:  √((J+M+2)(J+M+1)/2)
//! descending M → M−1:  √((J−M+2)(J−M+1)/2)
//! M-conserving:        √((J+M+1)(J−M+1))
//! ```

use serde::Serialize;

use crate::exact::{wigner3j_x, wigner3j_z, RadicalNumber, Rational, Sign};
use crate::oplib::{
    subsystem_dim, Block, DriftSpec, ExactOperator, Kind, PauliElement, StateIndex,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DriveError {
    #[error("operator error: {0}")]
    Operator(#[from] crate::oplib::OperatorError),
    #[error("exact arithmetic error: {0}")]
    Exact(#[from] crate::exact::ExactError),
    #[error("circular combination did not collapse to the expected single ladder: {0}")]
    LadderCollapse(String),
    #[error("the lower level must be lowest in energy for circular combinations")]
    DriftOrdering,
}

/// Which structural drive an operator is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DriveLabel {
    W1X,
    W1Y,
    W2Y,
    W2Z,
    SigmaPlus,
    SigmaMinus,
}

/// A structural (prefactor-free) drive operator for a given `J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralDrive {
    pub label: DriveLabel,
    pub j: u32,
    pub op: ExactOperator,
}

/// Ladder coefficient for the transition `M → M+s`, derived from the
/// closed-form 3j magnitude with the M-independent factor stripped:
/// `|3j(J,M,s)| / |3j at the unit rung|`.
pub fn ladder_coefficient(j: u32, m: i64, s: Sign) -> RadicalNumber {
    let mag_sq = wigner3j_x(j, m, s)
        .expect("ladder index in range")
        .single_term_squared()
        .expect("closed form is a single term");
    let unit_m = match s {
        Sign::Plus => -i64::from(j),
        Sign::Minus => i64::from(j),
    };
    let unit_sq = wigner3j_x(j, unit_m, s)
        .unwrap()
        .single_term_squared()
        .unwrap();
    RadicalNumber::sqrt_rational(&(mag_sq / unit_sq)).expect("small radicand")
}

/// M-conserving coefficient `√((J+M+1)(J−M+1))`, from the z-form 3j magnitude
/// scaled so the edge coefficient is `√(2J+1)`.
pub fn diagonal_coefficient(j: u32, m: i64) -> RadicalNumber {
    let mag_sq = wigner3j_z(j, m)
        .expect("|M| ≤ J")
        .single_term_squared()
        .expect("closed form is a single term");
    let edge_sq = wigner3j_z(j, i64::from(j)).unwrap().single_term_squared().unwrap();
    let scale = Rational::from_integer((2 * i64::from(j) + 1).into());
    RadicalNumber::sqrt_rational(&(mag_sq / edge_sq * scale)).expect("small radicand")
}

fn ladder_element(
    j: u32,
    kind: Kind,
    upper: Block,
    m: i64,
    mp: i64,
) -> (PauliElement, i64) {
    PauliElement::from_states(
        kind,
        j,
        StateIndex::new(Block::Tau, m),
        StateIndex::new(upper, mp),
    )
    .expect("ladder indices are in range")
}

fn ladder_drive(
    j: u32,
    label: DriveLabel,
    kind: Kind,
    upper: Block,
    descending_sign: i64,
) -> StructuralDrive {
    let mut op = ExactOperator::zero(subsystem_dim(j));
    for m in -i64::from(j)..=i64::from(j) {
        let up = ladder_coefficient(j, m, Sign::Plus);
        let (e, s) = ladder_element(j, kind, upper, m, m + 1);
        op.add_term(e, up.scaled(&crate::exact::rational_from_i64(s)));

        let down = ladder_coefficient(j, m, Sign::Minus);
        let (e, s) = ladder_element(j, kind, upper, m, m - 1);
        op.add_term(
            e,
            down.scaled(&crate::exact::rational_from_i64(s * descending_sign)),
        );
    }
    StructuralDrive { label, j, op }
}

/// x-polarized drive at ω₁: G elements on the τ↔τ′ ladders, all signs
/// positive.
pub fn drive_w1x(j: u32) -> StructuralDrive {
    ladder_drive(j, DriveLabel::W1X, Kind::G, Block::TauPrime, 1)
}

/// y-polarized drive at ω₁: F elements on the τ↔τ′ ladders, the descending
/// members carrying a minus sign.
pub fn drive_w1y(j: u32) -> StructuralDrive {
    ladder_drive(j, DriveLabel::W1Y, Kind::F, Block::TauPrime, -1)
}

/// y-polarized drive at ω₂: G elements on the τ↔τ″ ladders, descending
/// members negative.
pub fn drive_w2y(j: u32) -> StructuralDrive {
    ladder_drive(j, DriveLabel::W2Y, Kind::G, Block::TauDoublePrime, -1)
}

/// z-polarized drive at ω₂: M-conserving G elements on τ↔τ″, coefficients
/// `√((J+M+1)(J−M+1))` running from `√(2J+1)` at the edges to `J+1` at M=0.
pub fn drive_w2z(j: u32) -> StructuralDrive {
    let mut op = ExactOperator::zero(subsystem_dim(j));
    for m in -i64::from(j)..=i64::from(j) {
        let (e, s) = ladder_element(j, Kind::G, Block::TauDoublePrime, m, m);
        op.add_term(
            e,
            diagonal_coefficient(j, m).scaled(&crate::exact::rational_from_i64(s)),
        );
    }
    StructuralDrive { label: DriveLabel::W2Z, j, op }
}

/// Which circular combination to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Circular {
    Plus,
    Minus,
}

/// The circularly polarized combinations `½(iH_{ω₁,x} ± [iH₀, iH_{ω₁,y}]/ω₁)`.
///
/// The combination is computed operationally through the drift commutator —
/// not transcribed — and then checked against the expected single-ladder form
/// (σ₊ ascending, σ₋ descending); a mismatch means a sign convention broke
/// upstream and is reported as an error.
pub fn sigma_pm(
    j: u32,
    drift: &DriftSpec,
    which: Circular,
) -> Result<StructuralDrive, DriveError> {
    if !drift.tau_is_lowest() {
        return Err(DriveError::DriftOrdering);
    }
    let x = drive_w1x(j);
    let y = drive_w1y(j);
    let rotated = drift
        .commute_drift(&y.op)
        .scaled_rational(&drift.omega1().recip());
    let combo = match which {
        Circular::Plus => &x.op + &rotated,
        Circular::Minus => &x.op - &rotated,
    }
    .scaled_rational(&Rational::new(1.into(), 2.into()));

    // Expected form: a single ladder of ascending (σ₊) or descending
    // (σ₋) G elements.
    let (label, dir) = match which {
        Circular::Plus => (DriveLabel::SigmaPlus, Sign::Plus),
        Circular::Minus => (DriveLabel::SigmaMinus, Sign::Minus),
    };
    let mut expected = ExactOperator::zero(subsystem_dim(j));
    for m in -i64::from(j)..=i64::from(j) {
        let mp = match dir {
            Sign::Plus => m + 1,
            Sign::Minus => m - 1,
        };
        let (e, s) = ladder_element(j, Kind::G, Block::TauPrime, m, mp);
        expected.add_term(
            e,
            ladder_coefficient(j, m, dir).scaled(&crate::exact::rational_from_i64(s)),
        );
    }
    if combo != expected {
        return Err(DriveError::LadderCollapse(format!(
            "expected {expected}, got {combo}"
        )));
    }
    Ok(StructuralDrive { label, j, op: combo })
}

/// The five dense generators of the canonical configuration
/// `{iH₀ traceless, iH_{ω₁,x}, iH_{ω₁,y}, iH_{ω₂,y}, iH_{ω₂,z}}`.
pub fn canonical_generators(
    j: u32,
    drift: &DriftSpec,
) -> Vec<nalgebra::DMatrix<num_complex::Complex64>> {
    vec![
        drift.drift_dense_traceless(j),
        drive_w1x(j).op.to_dense(),
        drive_w1y(j).op.to_dense(),
        drive_w2y(j).op.to_dense(),
        drive_w2z(j).op.to_dense(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational_from_i64 as rat;

    fn sqrt(n: u128) -> RadicalNumber {
        RadicalNumber::sqrt_integer(n).unwrap()
    }

    fn coeff_of(d: &StructuralDrive, kind: Kind, upper: Block, m: i64, mp: i64) -> RadicalNumber {
        let (e, s) = ladder_element(d.j, kind, upper, m, mp);
        d.op.coefficient(&e).scaled(&rat(s))
    }

    #[test]
    fn w1x_j0_is_a_single_unit_pair() {
        let d = drive_w1x(0);
        assert_eq!(d.op.num_terms(), 2);
        assert_eq!(coeff_of(&d, Kind::G, Block::TauPrime, 0, 1), RadicalNumber::one());
        assert_eq!(coeff_of(&d, Kind::G, Block::TauPrime, 0, -1), RadicalNumber::one());
    }

    #[test]
    fn w1x_j1_coefficients() {
        let d = drive_w1x(1);
        assert_eq!(d.op.num_terms(), 6);
        // pairs (√6, √3, 1): top pair G_{1,2} + G_{−1,−2}
        assert_eq!(coeff_of(&d, Kind::G, Block::TauPrime, 1, 2), sqrt(6));
        assert_eq!(coeff_of(&d, Kind::G, Block::TauPrime, -1, -2), sqrt(6));
        assert_eq!(coeff_of(&d, Kind::G, Block::TauPrime, 0, 1), sqrt(3));
        assert_eq!(coeff_of(&d, Kind::G, Block::TauPrime, 0, -1), sqrt(3));
        assert_eq!(coeff_of(&d, Kind::G, Block::TauPrime, 1, 0), RadicalNumber::one());
        assert_eq!(coeff_of(&d, Kind::G, Block::TauPrime, -1, 0), RadicalNumber::one());
    }

    #[test]
    fn ladder_term_counts() {
        for j in 0..=20 {
            assert_eq!(drive_w1x(j).op.num_terms() as u32, 2 * (2 * j + 1));
            assert_eq!(drive_w1y(j).op.num_terms() as u32, 2 * (2 * j + 1));
            assert_eq!(drive_w2y(j).op.num_terms() as u32, 2 * (2 * j + 1));
            assert_eq!(drive_w2z(j).op.num_terms() as u32, 2 * j + 1);
        }
    }

    #[test]
    fn w1y_signs_follow_direction() {
        let d = drive_w1y(1);
        assert_eq!(coeff_of(&d, Kind::F, Block::TauPrime, 1, 2), sqrt(6));
        assert_eq!(coeff_of(&d, Kind::F, Block::TauPrime, -1, -2), -&sqrt(6));
        assert_eq!(coeff_of(&d, Kind::F, Block::TauPrime, -1, 0), RadicalNumber::one());
        assert_eq!(
            coeff_of(&d, Kind::F, Block::TauPrime, 1, 0),
            RadicalNumber::from_integer(-1)
        );
    }

    #[test]
    fn w2z_j0_and_j1() {
        let d0 = drive_w2z(0);
        assert_eq!(d0.op.num_terms(), 1);
        assert_eq!(
            coeff_of(&d0, Kind::G, Block::TauDoublePrime, 0, 0),
            RadicalNumber::one()
        );
        let d1 = drive_w2z(1);
        assert_eq!(coeff_of(&d1, Kind::G, Block::TauDoublePrime, 1, 1), sqrt(3));
        assert_eq!(coeff_of(&d1, Kind::G, Block::TauDoublePrime, -1, -1), sqrt(3));
        assert_eq!(
            coeff_of(&d1, Kind::G, Block::TauDoublePrime, 0, 0),
            RadicalNumber::from_integer(2)
        );
    }

    #[test]
    fn sigma_combinations_collapse_for_all_j() {
        let drift = DriftSpec::default_spacing();
        for j in 0..=20 {
            let sp = sigma_pm(j, &drift, Circular::Plus).unwrap();
            let sm = sigma_pm(j, &drift, Circular::Minus).unwrap();
            assert_eq!(sp.op.num_terms() as u32, 2 * j + 1);
            assert_eq!(sm.op.num_terms() as u32, 2 * j + 1);
            // σ₊ + σ₋ = iH_{ω₁,x}
            assert_eq!(&sp.op + &sm.op, drive_w1x(j).op);
        }
    }

    #[test]
    fn sigma_plus_j1_coefficients() {
        let drift = DriftSpec::default_spacing();
        let sp = sigma_pm(1, &drift, Circular::Plus).unwrap();
        assert_eq!(coeff_of(&sp, Kind::G, Block::TauPrime, 1, 2), sqrt(6));
        assert_eq!(coeff_of(&sp, Kind::G, Block::TauPrime, 0, 1), sqrt(3));
        assert_eq!(coeff_of(&sp, Kind::G, Block::TauPrime, -1, 0), RadicalNumber::one());
    }

    #[test]
    fn ladder_coefficients_strictly_increase_toward_the_top() {
        for j in 0..=20u32 {
            let mut prev: Option<Rational> = None;
            for m in -i64::from(j)..=i64::from(j) {
                let sq = ladder_coefficient(j, m, Sign::Plus)
                    .single_term_squared()
                    .unwrap();
                if let Some(p) = prev {
                    assert!(sq > p, "not strictly increasing at j={j} m={m}");
                }
                prev = Some(sq);
            }
        }
    }

    #[test]
    fn diagonal_coefficients_strictly_decrease_center_to_edge() {
        for j in 1..=20u32 {
            let mut prev: Option<Rational> = None;
            for m in 0..=i64::from(j) {
                let sq = diagonal_coefficient(j, m).single_term_squared().unwrap();
                if let Some(p) = prev {
                    assert!(sq < p, "not strictly decreasing at j={j} m={m}");
                }
                prev = Some(sq);
            }
        }
    }

    #[test]
    fn dense_images_are_anti_hermitian() {
        for j in [0u32, 1, 2] {
            for d in [drive_w1x(j), drive_w1y(j), drive_w2y(j), drive_w2z(j)] {
                let m = d.op.to_dense();
                let dev = (&m + &m.adjoint()).norm();
                assert!(dev < 1e-14, "{:?} at j={j}: {dev}", d.label);
            }
        }
    }
}
