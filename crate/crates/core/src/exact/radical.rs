//! Numbers of the form `Σ qᵢ·√rᵢ` with rational `qᵢ` and square-free positive
//! integer radicands `rᵢ`.
//!
//! Square roots of distinct square-free integers are linearly independent over
//! the rationals, so keeping every radicand square-free makes equality a plain
//! term-map comparison. The radicand 1 holds the rational part.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{rational_from_u128, ExactError, Rational};

/// Exact sum of rational multiples of square roots of square-free integers.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RadicalNumber {
    // radicand (square-free, ≥ 1) → nonzero rational coefficient
    terms: BTreeMap<u128, Rational>,
}

impl RadicalNumber {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(super::rational_from_i64(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    /// `√n` for a non-negative integer `n`, reduced to square-free form.
    pub fn sqrt_integer(n: u128) -> Result<Self, ExactError> {
        if n == 0 {
            return Ok(Self::zero());
        }
        let (outer, radicand) = square_free_split(n)?;
        let mut out = Self::zero();
        out.add_term(radicand, rational_from_u128(outer));
        Ok(out)
    }

    /// `√(p/q)` for a non-negative rational, as `√(p·q)/q`.
    pub fn sqrt_rational(r: &Rational) -> Result<Self, ExactError> {
        assert!(!r.is_negative(), "sqrt of negative rational");
        if r.is_zero() {
            return Ok(Self::zero());
        }
        let p: u128 = r
            .numer()
            .try_into()
            .map_err(|_| ExactError::RadicandTooLarge(u128::MAX))?;
        let q: u128 = r
            .denom()
            .try_into()
            .map_err(|_| ExactError::RadicandTooLarge(u128::MAX))?;
        let mut root = Self::sqrt_integer(
            p.checked_mul(q).ok_or(ExactError::RadicandTooLarge(p))?,
        )?;
        root.scale_assign(&Rational::new(1.into(), q.into()));
        Ok(root)
    }

    /// Builds `q·√r` from an already square-free radicand. Used by the Wigner
    /// symbol code, which obtains square-free radicands from prime
    /// factorizations directly.
    pub(crate) fn from_square_free(radicand: u128, coeff: Rational) -> Self {
        debug_assert!(radicand >= 1);
        let mut out = Self::zero();
        out.add_term(radicand, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `√r`, zero if absent.
    pub fn coefficient(&self, radicand: u128) -> Rational {
        self.terms.get(&radicand).cloned().unwrap_or_else(Rational::zero)
    }

    /// Some(q) iff the number is plain rational `q` (including zero).
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    /// Some((radicand, coeff)) iff the number is a single term `coeff·√radicand`.
    pub fn as_single_term(&self) -> Option<(u128, Rational)> {
        if self.terms.len() == 1 {
            let (r, q) = self.terms.iter().next().unwrap();
            Some((*r, q.clone()))
        } else {
            None
        }
    }

    /// Exact square of the number's magnitude when it is a single term.
    pub fn single_term_squared(&self) -> Option<Rational> {
        self.as_single_term()
            .map(|(r, q)| &q * &q * rational_from_u128(r))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u128, &Rational)> {
        self.terms.iter().map(|(r, q)| (*r, q))
    }

    fn add_term(&mut self, radicand: u128, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(radicand) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale_assign(&mut self, q: &Rational) {
        if q.is_zero() {
            self.terms.clear();
            return;
        }
        for coeff in self.terms.values_mut() {
            *coeff *= q;
        }
    }

    pub fn scaled(&self, q: &Rational) -> Self {
        let mut out = self.clone();
        out.scale_assign(q);
        out
    }

    pub fn div_rational(&self, q: &Rational) -> Self {
        assert!(!q.is_zero(), "division by zero rational");
        self.scaled(&q.recip())
    }

    /// Reciprocal of a single-term number: `1/(q√r) = √r/(q·r)`.
    pub fn recip(&self) -> Result<Self, ExactError> {
        let (r, q) = match self.as_single_term() {
            Some(t) => t,
            None if self.is_zero() => return Err(ExactError::DivisionByZero),
            None => return Err(ExactError::NotInvertible(format!("{self}"))),
        };
        Ok(Self::from_square_free(
            r,
            (&q * rational_from_u128(r)).recip(),
        ))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, q)| rational_to_f64(q) * (*r as f64).sqrt())
            .sum()
    }
}

fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Splits `n = outer² · radicand` with `radicand` square-free.
///
/// Factors by trial division. Any residual cofactor after removing all prime
/// factors below 10⁶ has at most two prime factors when it is below 10¹⁸, so
/// it is square-free once a perfect square is ruled out; larger residuals are
/// rejected rather than silently mis-normalized.
fn square_free_split(n: u128) -> Result<(u128, u128), ExactError> {
    let mut rest = n;
    let mut outer: u128 = 1;
    let mut radicand: u128 = 1;
    let mut factor = |p: u128, rest: &mut u128| {
        let mut e = 0u32;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            outer *= p.pow(e / 2);
            if e % 2 == 1 {
                radicand *= p;
            }
        }
    };
    factor(2, &mut rest);
    let mut p: u128 = 3;
    while p * p <= rest && p < 1_000_000 {
        factor(p, &mut rest);
        p += 2;
    }
    if rest > 1 {
        let root = rest.isqrt();
        if root * root == rest {
            outer *= root;
        } else if rest < 1_000_000_000_000_000_000 {
            // At most two prime factors, both > 10⁶ and distinct: square-free.
            radicand *= rest;
        } else {
            return Err(ExactError::RadicandTooLarge(n));
        }
    }
    Ok((outer, radicand))
}

impl AddAssign<&RadicalNumber> for RadicalNumber {
    fn add_assign(&mut self, rhs: &RadicalNumber) {
        for (r, q) in &rhs.terms {
            self.add_term(*r, q.clone());
        }
    }
}

impl Add for &RadicalNumber {
    type Output = RadicalNumber;
    fn add(self, rhs: &RadicalNumber) -> RadicalNumber {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &RadicalNumber {
    type Output = RadicalNumber;
    fn sub(self, rhs: &RadicalNumber) -> RadicalNumber {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl Neg for &RadicalNumber {
    type Output = RadicalNumber;
    fn neg(self) -> RadicalNumber {
        let mut out = self.clone();
        for q in out.terms.values_mut() {
            *q = -q.clone();
        }
        out
    }
}

impl Mul for &RadicalNumber {
    type Output = RadicalNumber;

    /// `√r₁·√r₂ = g·√((r₁/g)(r₂/g))` with `g = gcd(r₁, r₂)`. For square-free
    /// inputs the reduced product is square-free again, so no factorization is
    /// needed here.
    fn mul(self, rhs: &RadicalNumber) -> RadicalNumber {
        let mut out = RadicalNumber::zero();
        for (ra, qa) in &self.terms {
            for (rb, qb) in &rhs.terms {
                let g = ra.gcd(rb);
                let radicand = (ra / g)
                    .checked_mul(rb / g)
                    .expect("radicand product overflow");
                let coeff = qa * qb * rational_from_u128(g);
                out.add_term(radicand, coeff);
            }
        }
        out
    }
}

impl fmt::Display for RadicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, q)) in self.terms.iter().enumerate() {
            let (sign, mag) = if q.is_negative() {
                ("-", -q.clone())
            } else {
                ("", q.clone())
            };
            if i > 0 {
                write!(f, " {} ", if sign.is_empty() { "+" } else { "-" })?;
            } else {
                write!(f, "{sign}")?;
            }
            if *r == 1 {
                write!(f, "{mag}")?;
            } else if mag == Rational::from_integer(1.into()) {
                write!(f, "√{r}")?;
            } else {
                write!(f, "{mag}·√{r}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadicalNumber({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(n: u128) -> RadicalNumber {
        RadicalNumber::sqrt_integer(n).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = sqrt(2);
        let b = -&sqrt(2);
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn rational_parts_cancel_across_terms() {
        // (1 + √3) + (2 − √3) = 3
        let a = &RadicalNumber::from_integer(1) + &sqrt(3);
        let b = &RadicalNumber::from_integer(2) - &sqrt(3);
        assert_eq!(
            (&a + &b).as_rational(),
            Some(Rational::from_integer(3.into()))
        );
    }

    #[test]
    fn like_terms_combine() {
        let half_sqrt6 = sqrt(6).scaled(&rat(1, 2));
        assert_eq!(&half_sqrt6 + &half_sqrt6, sqrt(6));
    }

    #[test]
    fn square_extraction() {
        assert_eq!(&sqrt(2) * &sqrt(2), RadicalNumber::from_integer(2));
        // √6·√3 = √18 = 3√2
        assert_eq!(&sqrt(6) * &sqrt(3), sqrt(2).scaled(&rat(3, 1)));
    }

    #[test]
    fn conjugate_product() {
        let a = &RadicalNumber::from_integer(1) + &sqrt(2);
        let b = &RadicalNumber::from_integer(1) - &sqrt(2);
        assert_eq!(&a * &b, RadicalNumber::from_integer(-1));
    }

    #[test]
    fn sqrt_normalizes_square_factors() {
        assert_eq!(sqrt(18), sqrt(2).scaled(&rat(3, 1)));
        assert_eq!(sqrt(144), RadicalNumber::from_integer(12));
        assert_eq!(sqrt(1), RadicalNumber::from_integer(1));
    }

    #[test]
    fn recip_of_single_term() {
        let x = sqrt(3).scaled(&rat(2, 1)); // 2√3
        let inv = x.recip().unwrap(); // √3/6
        assert_eq!(&x * &inv, RadicalNumber::one());
        assert!(RadicalNumber::zero().recip().is_err());
        assert!((&sqrt(2) + &sqrt(3)).recip().is_err());
    }

    #[test]
    fn sqrt_rational_reduces() {
        // √(3/2) = √6/2
        let x = RadicalNumber::sqrt_rational(&rat(3, 2)).unwrap();
        assert_eq!(x, sqrt(6).scaled(&rat(1, 2)));
        assert_eq!((&x * &x).as_rational(), Some(rat(3, 2)));
    }
}
