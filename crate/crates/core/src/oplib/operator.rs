//! Sparse anti-Hermitian operators: linear combinations of generalized Pauli
//! matrices with radical-number coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::exact::{RadicalNumber, Rational};

use super::pauli::{Kind, PauliElement};
use super::structure::commutator_table_entries;
use super::OperatorError;

/// A traceless anti-Hermitian operator on the subsystem, stored as a canonical
/// term map. Every `G`/`F`/`D` basis element is anti-Hermitian and traceless,
/// so any real-radical combination is too.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ExactOperator {
    dim: u32,
    terms: BTreeMap<PauliElement, RadicalNumber>,
}

impl ExactOperator {
    pub fn zero(dim: u32) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliElement, &RadicalNumber)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, elem: &PauliElement) -> RadicalNumber {
        self.terms.get(elem).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, elem: PauliElement, coeff: RadicalNumber) {
        debug_assert!(elem.k < self.dim, "element outside operator dimension");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(elem) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn single(dim: u32, elem: PauliElement, coeff: RadicalNumber) -> Self {
        let mut op = Self::zero(dim);
        op.add_term(elem, coeff);
        op
    }

    /// Some((element, coefficient)) iff the operator has exactly one term.
    pub fn as_single(&self) -> Option<(PauliElement, RadicalNumber)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((*e, c.clone()))
        } else {
            None
        }
    }

    pub fn scale_rational(&mut self, q: &Rational) {
        use num_traits::Zero;
        if q.is_zero() {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            c.scale_assign(q);
        }
    }

    pub fn scaled_rational(&self, q: &Rational) -> Self {
        let mut out = self.clone();
        out.scale_rational(q);
        out
    }

    pub fn scale_radical(&mut self, s: &RadicalNumber) {
        let old = std::mem::take(&mut self.terms);
        for (e, c) in old {
            self.add_term(e, &c * s);
        }
    }

    /// Removes all terms whose basis element satisfies the predicate and
    /// returns them.
    pub fn split_off_where<P: Fn(&PauliElement) -> bool>(&mut self, pred: P) -> Self {
        let mut removed = Self::zero(self.dim);
        let old = std::mem::take(&mut self.terms);
        for (e, c) in old {
            if pred(&e) {
                removed.terms.insert(e, c);
            } else {
                self.terms.insert(e, c);
            }
        }
        removed
    }

    /// Exact commutator, term-pair-wise through the structure-constant table.
    pub fn commutator(&self, other: &Self) -> Result<Self, OperatorError> {
        if self.dim != other.dim {
            return Err(OperatorError::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let entries = commutator_table_entries(ea, eb);
                if entries.is_empty() {
                    continue;
                }
                let prod = ca * cb;
                for (coeff, elem) in entries {
                    out.add_term(
                        elem,
                        prod.scaled(&crate::exact::rational_from_i64(coeff)),
                    );
                }
            }
        }
        Ok(out)
    }

    /// Dense double-precision image; anti-Hermitian to machine precision by
    /// construction.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim as usize;
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for (e, c) in &self.terms {
            let v = c.to_f64();
            let (j, k) = (e.j as usize, e.k as usize);
            match e.kind {
                Kind::G => {
                    m[(j, k)] += Complex64::new(v, 0.0);
                    m[(k, j)] -= Complex64::new(v, 0.0);
                }
                Kind::F => {
                    m[(j, k)] += Complex64::new(0.0, v);
                    m[(k, j)] += Complex64::new(0.0, v);
                }
                Kind::D => {
                    m[(j, j)] += Complex64::new(0.0, v);
                    m[(k, k)] -= Complex64::new(0.0, v);
                }
            }
        }
        m
    }
}

/// Dense image of a single basis element on an `n`-dimensional space:
///
/// ```text
/// G_jk = e_jk − e_kj      F_jk = i e_jk + i e_kj      D_jk = i e_jj − i e_kk
/// ```
pub fn element_matrix(e: &PauliElement, n: u32) -> Result<DMatrix<Complex64>, OperatorError> {
    if e.k >= n {
        return Err(OperatorError::FlatOutOfRange(e.k, n));
    }
    Ok(ExactOperator::single(n, *e, RadicalNumber::one()).to_dense())
}

/// `p`-fold nested commutator `ad_base^p(target)`, with `ad⁰ = target`.
pub fn ad_power(
    base: &ExactOperator,
    target: &ExactOperator,
    p: u32,
) -> Result<ExactOperator, OperatorError> {
    let mut acc = target.clone();
    for _ in 0..p {
        acc = base.commutator(&acc)?;
    }
    Ok(acc)
}

impl AddAssign<&ExactOperator> for ExactOperator {
    fn add_assign(&mut self, rhs: &ExactOperator) {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for &ExactOperator {
    type Output = ExactOperator;
    fn add(self, rhs: &ExactOperator) -> ExactOperator {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &ExactOperator {
    type Output = ExactOperator;
    fn sub(self, rhs: &ExactOperator) -> ExactOperator {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl Neg for &ExactOperator {
    type Output = ExactOperator;
    fn neg(self) -> ExactOperator {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }
}

impl fmt::Display for ExactOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactOperator[dim {}]({self})", self.dim)
    }
}
