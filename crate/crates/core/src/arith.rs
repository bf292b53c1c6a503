//! Exact integer arithmetic: Bezout coefficients, trial-division factorization
//! and the CRT splitting of a cyclic group into its primary components.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("cannot factorize {0}: expected a positive integer")]
    NonPositive(BigInt),
    #[error("empty list of values")]
    EmptyList,
    #[error("CRT decomposition needs a modulus >= 2, got {0}")]
    ModulusTooSmall(BigInt),
}

/// A factor `prime^exponent` with `exponent >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    pub prime: BigInt,
    pub exponent: u32,
}

impl PrimePower {
    pub fn new(prime: impl Into<BigInt>, exponent: u32) -> Self {
        PrimePower { prime: prime.into(), exponent }
    }

    pub fn value(&self) -> BigInt {
        num_traits::pow(self.prime.clone(), self.exponent as usize)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.prime)
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

/// Isomorphism `Z_d -> Z_{p1^k1} x ... x Z_{pn^kn}` and its inverse.
///
/// The generator of `Z_d` maps to `(forward_exponents[a])_a`; the generator of
/// the `a`-th component maps back to `backward_exponents[a] = d / p_a^{k_a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtSplit {
    pub modulus: BigInt,
    pub components: Vec<PrimePower>,
    pub forward_exponents: Vec<BigInt>,
    pub backward_exponents: Vec<BigInt>,
}

impl CrtSplit {
    /// `sum forward[a] * backward[a] mod d`; equals 1 for a valid split.
    pub fn composite_residue(&self) -> BigInt {
        let total: BigInt = self
            .forward_exponents
            .iter()
            .zip(&self.backward_exponents)
            .map(|(f, b)| f * b)
            .sum();
        total.mod_floor(&self.modulus)
    }
}

/// Extended gcd with canonical coefficients.
///
/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(|a|, |b|)`, where `x` has the
/// smallest absolute value among all solutions (ties go to `x >= 0`). When
/// `b = 0` the coefficient `x` is forced and `y` is taken to be 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt), ArithError> {
    if a.is_zero() && b.is_zero() {
        return Err(ArithError::BothZero);
    }
    let ext = a.extended_gcd(b);
    let (g, x0) = if ext.gcd.is_negative() { (-ext.gcd, -ext.x) } else { (ext.gcd, ext.x) };
    if b.is_zero() {
        // a*x = g forces x = sign(a); y is free.
        return Ok((g, a.signum(), BigInt::zero()));
    }
    let step = (b / &g).abs();
    let r = x0.mod_floor(&step);
    // candidates r and r - step; on a tie keep the nonnegative one
    let x = if &step - &r < r { r - &step } else { r };
    let y = (&g - a * &x) / b;
    debug_assert_eq!(a * &x + b * &y, g);
    Ok((g, x, y))
}

/// Deterministic primality test by trial division.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for small in [2u32, 3, 5] {
        let s = BigInt::from(small);
        if n == &s {
            return true;
        }
        if n.is_multiple_of(&s) {
            return false;
        }
    }
    let mut d = BigInt::from(7);
    let mut wheel = WHEEL.iter().cycle();
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            return false;
        }
        d += *wheel.next().unwrap();
    }
    true
}

// Gaps between successive integers coprime to 30, starting from 7.
const WHEEL: [u32; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// Prime factorization in ascending prime order; `factorize(1)` is empty.
pub fn factorize(n: &BigInt) -> Result<Vec<PrimePower>, ArithError> {
    if !n.is_positive() {
        return Err(ArithError::NonPositive(n.clone()));
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    let pull = |rest: &mut BigInt, p: &BigInt, out: &mut Vec<PrimePower>| {
        let mut e = 0u32;
        while rest.is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push(PrimePower::new(p.clone(), e));
        }
    };
    for small in [2u32, 3, 5] {
        pull(&mut rest, &BigInt::from(small), &mut out);
    }
    let mut d = BigInt::from(7);
    let mut wheel = WHEEL.iter().cycle();
    while &d * &d <= rest {
        pull(&mut rest, &d, &mut out);
        d += *wheel.next().unwrap();
    }
    if rest > BigInt::one() {
        out.push(PrimePower::new(rest, 1));
    }
    Ok(out)
}

/// Left fold of [`ext_gcd`] over `values`: returns `(g, c)` with
/// `sum c[i] * values[i] = g = gcd(values)`.
pub fn multi_bezout(values: &[BigInt]) -> Result<(BigInt, Vec<BigInt>), ArithError> {
    let (first, rest) = values.split_first().ok_or(ArithError::EmptyList)?;
    if let Some(bad) = values.iter().find(|v| !v.is_positive()) {
        return Err(ArithError::NonPositive(bad.clone()));
    }
    let mut g = first.clone();
    let mut coeffs = vec![BigInt::one()];
    for v in rest {
        let (g2, x, y) = ext_gcd(&g, v)?;
        for c in coeffs.iter_mut() {
            *c *= &x;
        }
        coeffs.push(y);
        g = g2;
    }
    Ok((g, coeffs))
}

pub fn crt_decomposition(d: &BigInt) -> Result<CrtSplit, ArithError> {
    if d < &BigInt::from(2) {
        return Err(ArithError::ModulusTooSmall(d.clone()));
    }
    let components = factorize(d)?;
    let backward_exponents: Vec<BigInt> = components.iter().map(|pp| d / pp.value()).collect();
    let (g, forward_exponents) = multi_bezout(&backward_exponents)?;
    debug_assert!(g.is_one());
    Ok(CrtSplit {
        modulus: d.clone(),
        components,
        forward_exponents,
        backward_exponents,
    })
}

/// Largest power of `p` dividing `n` (n != 0), as `(exponent, cofactor)`.
pub fn split_prime(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut rest = n.abs();
    let mut e = 0;
    while !rest.is_zero() && rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (e, rest)
}

/// True iff `n = p^e` for some `e >= 0`.
pub fn is_power_of(n: &BigInt, p: &BigInt) -> bool {
    n.is_positive() && split_prime(n, p).1.is_one()
}

/// True iff `n` is `1` or a power of a single prime.
pub fn is_prime_power_or_one(n: &BigInt) -> bool {
    match factorize(n) {
        Ok(f) => f.len() <= 1,
        Err(_) => false,
    }
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}
