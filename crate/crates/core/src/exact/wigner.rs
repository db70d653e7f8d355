//! Exact Wigner 3j symbols.
//!
//! [`wigner3j`] evaluates the general Racah sum in exact rational arithmetic;
//! every 3j value is a rational multiple of a single square root, which is
//! exactly what [`RadicalNumber`] represents. [`wigner3j_x`] and [`wigner3j_z`]
//! are independent closed forms for the `(J 1 J+1)` column with `m₂ = ±1` and
//! `m₂ = 0`; they are cross-checked against the Racah sum in the test suite
//! rather than implemented through it.
//!
//! Sign convention: the standard Racah (Condon–Shortley) convention
//! throughout, e.g. `(1 1 0; 0 0 0) = −1/√3`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{ExactError, Rational};
use crate::exact::RadicalNumber;

/// Validated arguments of a 3j symbol: `|mᵢ| ≤ jᵢ` is enforced at
/// construction; the triangle rule and `m₁+m₂+m₃ = 0` are value-level
/// selection rules and yield an exact zero instead of an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThreeJArgs {
    pub j1: u32,
    pub j2: u32,
    pub j3: u32,
    pub m1: i64,
    pub m2: i64,
    pub m3: i64,
}

impl ThreeJArgs {
    pub fn new(
        j1: u32,
        j2: u32,
        j3: u32,
        m1: i64,
        m2: i64,
        m3: i64,
    ) -> Result<Self, ExactError> {
        for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
            if m.unsigned_abs() > u64::from(j) {
                return Err(ExactError::ProjectionOutOfRange { j, m });
            }
        }
        Ok(Self { j1, j2, j3, m1, m2, m3 })
    }

    fn triangle_ok(&self) -> bool {
        let (j1, j2, j3) = (i64::from(self.j1), i64::from(self.j2), i64::from(self.j3));
        (j1 - j2).abs() <= j3 && j3 <= j1 + j2
    }
}

/// Sign selector for the `m₂ = ±1` closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

fn factorials() -> &'static std::sync::Mutex<Vec<BigUint>> {
    static TABLE: OnceLock<std::sync::Mutex<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| std::sync::Mutex::new(vec![BigUint::one()]))
}

fn factorial(n: u64) -> BigUint {
    let mut table = factorials().lock().unwrap();
    while table.len() <= n as usize {
        let next = table.last().unwrap() * BigUint::from(table.len());
        table.push(next);
    }
    table[n as usize].clone()
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
    }
    out
}

/// Adds `sign` times the prime exponents of `n!` (Legendre's formula).
fn add_factorial_exponents(map: &mut BTreeMap<u64, i64>, n: u64, sign: i64) {
    if n < 2 {
        return;
    }
    for p in primes_up_to(n) {
        let mut e = 0i64;
        let mut q = p;
        while q <= n {
            e += (n / q) as i64;
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
        *map.entry(p).or_insert(0) += sign * e;
    }
}

/// Turns a prime-exponent map into `q·√r` with square-free `r`: even exponent
/// parts go into the rational factor, odd remainders into the radicand.
fn exponent_map_sqrt(map: &BTreeMap<u64, i64>) -> Result<(Rational, u128), ExactError> {
    let mut numer = BigUint::one();
    let mut denom = BigUint::one();
    let mut radicand: u128 = 1;
    for (&p, &e) in map {
        if e == 0 {
            continue;
        }
        let half = e.div_euclid(2);
        let rem = e.rem_euclid(2);
        if half >= 0 {
            numer *= BigUint::from(p).pow(half as u32);
        } else {
            denom *= BigUint::from(p).pow((-half) as u32);
        }
        // p^e = p^(2·half)·p^rem with rem ∈ {0,1}, so √(p^e) = p^half·√(p^rem)
        if rem == 1 {
            radicand = radicand
                .checked_mul(u128::from(p))
                .ok_or(ExactError::RadicandTooLarge(u128::MAX))?;
        }
    }
    Ok((
        Rational::new(BigInt::from(numer), BigInt::from(denom)),
        radicand,
    ))
}

/// Exact Wigner 3j symbol by the Racah sum.
///
/// Selection-rule violations (`m₁+m₂+m₃ ≠ 0` or triangle failure) return the
/// exact zero.
pub fn wigner3j(args: &ThreeJArgs) -> RadicalNumber {
    if args.m1 + args.m2 + args.m3 != 0 || !args.triangle_ok() {
        return RadicalNumber::zero();
    }
    let (j1, j2, j3) = (i64::from(args.j1), i64::from(args.j2), i64::from(args.j3));
    let (m1, m2, m3) = (args.m1, args.m2, args.m3);

    // Alternating sum Σₖ (−1)ᵏ / [k!(j1+j2−j3−k)!(j1−m1−k)!(j2+m2−k)!
    //                              (j3−j2+m1+k)!(j3−j1−m2+k)!]
    let k_min = 0.max(-(j3 - j2 + m1)).max(-(j3 - j1 - m2));
    let k_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut series = Rational::zero();
    for k in k_min..=k_max {
        let denom = factorial(k as u64)
            * factorial((j1 + j2 - j3 - k) as u64)
            * factorial((j1 - m1 - k) as u64)
            * factorial((j2 + m2 - k) as u64)
            * factorial((j3 - j2 + m1 + k) as u64)
            * factorial((j3 - j1 - m2 + k) as u64);
        let term = Rational::new(BigInt::one(), BigInt::from(denom));
        if k % 2 == 0 {
            series += term;
        } else {
            series -= term;
        }
    }
    if series.is_zero() {
        return RadicalNumber::zero();
    }

    // √[Δ(j1j2j3)·Π(jᵢ±mᵢ)!] as exact prime exponents, split into a rational
    // factor and a square-free radicand.
    let mut exps = BTreeMap::new();
    add_factorial_exponents(&mut exps, (j1 + j2 - j3) as u64, 1);
    add_factorial_exponents(&mut exps, (j1 - j2 + j3) as u64, 1);
    add_factorial_exponents(&mut exps, (-j1 + j2 + j3) as u64, 1);
    add_factorial_exponents(&mut exps, (j1 + j2 + j3 + 1) as u64, -1);
    add_factorial_exponents(&mut exps, (j1 + m1) as u64, 1);
    add_factorial_exponents(&mut exps, (j1 - m1) as u64, 1);
    add_factorial_exponents(&mut exps, (j2 + m2) as u64, 1);
    add_factorial_exponents(&mut exps, (j2 - m2) as u64, 1);
    add_factorial_exponents(&mut exps, (j3 + m3) as u64, 1);
    add_factorial_exponents(&mut exps, (j3 - m3) as u64, 1);
    let (outer, radicand) =
        exponent_map_sqrt(&exps).expect("3j radicand exceeds u128");

    let mut coeff = outer * series;
    if (j1 - j2 - m3).rem_euclid(2) == 1 {
        coeff = -coeff;
    }
    RadicalNumber::from_square_free(radicand, coeff)
}

/// Closed form for `(J 1 J+1; M ±1 −(M±1))` in the Racah convention:
///
/// ```text
/// (−1)^(J+M) √((J±M+2)(J±M+1)) / √((2J+3)(2J+2)(2J+1))
/// ```
pub fn wigner3j_x(j: u32, m: i64, s: Sign) -> Result<RadicalNumber, ExactError> {
    let jj = i64::from(j);
    if m.abs() > jj {
        return Err(ExactError::ProjectionOutOfRange { j, m });
    }
    if (m + s.as_i64()).abs() > jj + 1 {
        return Err(ExactError::ProjectionOutOfRange { j: j + 1, m: m + s.as_i64() });
    }
    let pm = s.as_i64() * m;
    let numer = ((jj + pm + 2) * (jj + pm + 1)) as u128;
    let denom = ((2 * jj + 3) * (2 * jj + 2) * (2 * jj + 1)) as u128;
    let mut value = RadicalNumber::sqrt_rational(&Rational::new(
        BigInt::from(numer),
        BigInt::from(denom),
    ))?;
    if (jj + m).rem_euclid(2) == 1 {
        value = -&value;
    }
    Ok(value)
}

/// Closed form for `(J 1 J+1; M 0 −M)` in the Racah convention:
///
/// ```text
/// (−1)^(J+M+1) √((J+M+1)(J−M+1)) / √((2J+3)(2J+1)(J+1))
/// ```
///
/// Note the overall sign: the `(−1)^(J+M+1)` prefactor is what the Racah
/// convention requires for this column (the `m₂ = ±1` forms above carry
/// `(−1)^(J+M)` instead).
pub fn wigner3j_z(j: u32, m: i64) -> Result<RadicalNumber, ExactError> {
    let jj = i64::from(j);
    if m.abs() > jj {
        return Err(ExactError::ProjectionOutOfRange { j, m });
    }
    let numer = ((jj + m + 1) * (jj - m + 1)) as u128;
    let denom = ((2 * jj + 3) * (2 * jj + 1) * (jj + 1)) as u128;
    let mut value = RadicalNumber::sqrt_rational(&Rational::new(
        BigInt::from(numer),
        BigInt::from(denom),
    ))?;
    if (jj + m).rem_euclid(2) == 0 {
        value = -&value;
    }
    Ok(value)
}
