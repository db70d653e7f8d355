//! Ladder inversion: separating the rungs of a ladder drive by inverting the
//! Vandermonde system formed by repeated double applications of the drift
//! map.
//!
//! For a ladder `L = Σ c_g·U_g` whose rungs touch pairwise disjoint state
//! pairs, the map `A ↦ [J(L), A]` with `J(L) = [iH₀, L]/ΔE` sends each rung
//! through `G → D → G` so that the double application multiplies rung `g` by
//! `−4c_g²`. Collecting `ad⁰, ad², …` gives a Vandermonde system in the
//! rational nodes `x_g = −4c_g²`, which is solved by exact Lagrange
//! interpolation after checking the nodes are pairwise distinct.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::drives::StructuralDrive;
use crate::exact::{rational_from_i64, Rational};
use crate::oplib::{DriftSpec, ExactOperator, StateIndex};

use super::ProofError;

/// The distinct squared-coefficient groups of a ladder drive, keyed by `c²`
/// in descending order, each with the sub-operator carrying that coefficient.
fn coefficient_groups(
    drive: &StructuralDrive,
) -> Result<BTreeMap<Rational, ExactOperator>, ProofError> {
    let mut groups: BTreeMap<Rational, ExactOperator> = BTreeMap::new();
    for (elem, coeff) in drive.op.terms() {
        let sq = coeff.single_term_squared().ok_or_else(|| ProofError::NotSingle {
            context: "ladder coefficient".into(),
            got: format!("{coeff}"),
        })?;
        groups
            .entry(sq)
            .or_insert_with(|| ExactOperator::zero(drive.op.dim()))
            .add_term(*elem, coeff.clone());
    }
    Ok(groups)
}

/// The rational Vandermonde nodes `−4c²` of a ladder drive, one per distinct
/// squared coefficient, in descending coefficient order.
pub fn ladder_nodes(drive: &StructuralDrive) -> Result<Vec<Rational>, ProofError> {
    Ok(coefficient_groups(drive)?
        .into_keys()
        .rev()
        .map(|sq| sq * rational_from_i64(-4))
        .collect())
}

/// Exact determinant of the Vandermonde matrix on the given nodes,
/// `Π_{i<j} (x_j − x_i)`.
///
/// Numerator and denominator are accumulated as raw big integers; reducing a
/// many-thousand-digit running product on every factor is quadratic and
/// dominates the runtime at large J.
pub fn vandermonde_determinant(nodes: &[Rational]) -> Rational {
    use num_bigint::BigInt;
    use num_traits::One;
    let mut numer = BigInt::one();
    let mut denom = BigInt::one();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let diff = &nodes[j] - &nodes[i];
            let (dn, dd) = diff.into_raw();
            numer *= dn;
            denom *= dd;
        }
    }
    if denom.is_one() {
        Rational::new_raw(numer, denom)
    } else {
        Rational::new(numer, denom)
    }
}

/// Signed block spacing `E_upper − E_τ` of the drive's transition, read off
/// its first term.
fn signed_spacing(drive: &StructuralDrive, drift: &DriftSpec) -> Rational {
    let (elem, _) = drive.op.terms().next().expect("drive is nonempty");
    let upper = StateIndex::from_flat(drive.j, elem.k).expect("in range").block;
    drift.energy(upper).clone() - drift.energy(crate::oplib::Block::Tau)
}

/// Separates the coefficient groups of a ladder drive.
///
/// Returns the recovered group operators in descending coefficient order and
/// verifies each against the group actually present in the drive — the
/// inversion must reproduce them exactly.
pub fn isolate_ladder(
    drive: &StructuralDrive,
    drift: &DriftSpec,
) -> Result<Vec<ExactOperator>, ProofError> {
    let groups = coefficient_groups(drive)?;
    let nodes: Vec<Rational> = groups
        .keys()
        .rev()
        .map(|sq| sq.clone() * rational_from_i64(-4))
        .collect();
    let expected: Vec<&ExactOperator> = groups.values().rev().collect();
    let k = nodes.len();
    for i in 0..k {
        for j in (i + 1)..k {
            if nodes[i] == nodes[j] {
                return Err(ProofError::CoefficientCollision(
                    format!("{}", nodes[i]),
                    format!("{}", nodes[j]),
                ));
            }
        }
    }

    // ad powers: B_s = ad²ˢ of the ladder under its own drift map.
    let spacing = signed_spacing(drive, drift);
    let jop = drift
        .commute_drift(&drive.op)
        .scaled_rational(&spacing.recip());
    let mut powers = Vec::with_capacity(k);
    let mut cur = drive.op.clone();
    powers.push(cur.clone());
    for _ in 1..k {
        cur = jop.commutator(&jop.commutator(&cur)?)?;
        powers.push(cur.clone());
    }

    // Lagrange inversion: U_g = Σ_s ℓ_g[s]·B_s with ℓ_g the Lagrange basis
    // polynomial of node g.
    let mut master = vec![Rational::from_integer(1.into())]; // Π (x − x_h)
    for x in &nodes {
        let mut next = vec![Rational::zero(); master.len() + 1];
        for (d, c) in master.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * x;
        }
        master = next;
    }
    let mut out = Vec::with_capacity(k);
    for (g, xg) in nodes.iter().enumerate() {
        // synthetic division master / (x − xg)
        let mut q = vec![Rational::zero(); k];
        q[k - 1] = master[k].clone();
        for d in (0..k - 1).rev() {
            q[d] = &master[d + 1] + &(&q[d + 1] * xg);
        }
        let remainder = &master[0] + &(&q[0] * xg);
        debug_assert!(remainder.is_zero(), "node must be a root of the master poly");
        let denom: Rational = nodes
            .iter()
            .enumerate()
            .filter(|(h, _)| *h != g)
            .map(|(_, xh)| xg - xh)
            .product();
        let mut u = ExactOperator::zero(drive.op.dim());
        for (s, b) in powers.iter().enumerate() {
            if !q[s].is_zero() {
                u += &b.scaled_rational(&(&q[s] / &denom));
            }
        }
        if &u != expected[g] {
            return Err(ProofError::UnexpectedOperator {
                context: format!("ladder inversion, node {xg}"),
                expected: format!("{}", expected[g]),
                got: format!("{u}"),
            });
        }
        out.push(u);
    }
    Ok(out)
}
