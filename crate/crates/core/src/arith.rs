//! Exact integer primitives: gcd, valuations, radicals, integer roots, and
//! recognition of the middle term `2^(2α) 5^(2β) p^(2γ)`.
//!
//! Everything here works on [`BigInt`]; there is no fixed-width fast path,
//! so results are exact at any magnitude.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer used for every arithmetic value.
pub type BigInteger = BigInt;

/// Default trial-division bound used by [`power_shape`].
pub const DEFAULT_TRIAL_BOUND: u64 = 10_000;

/// Non-negative greatest common divisor.
pub fn gcd(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    Ok(a.gcd(b))
}

/// Largest `e` with `q^e | a`.
pub fn valuation(q: &BigInt, a: &BigInt) -> Result<u32> {
    if a.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q.to_string()));
    }
    Ok(strip_factor(&mut a.abs(), q))
}

/// Divides every factor `q` out of `n` in place and returns how many there were.
fn strip_factor(n: &mut BigInt, q: &BigInt) -> u32 {
    let mut e = 0;
    loop {
        let (quot, rem) = n.div_rem(q);
        if !rem.is_zero() {
            return e;
        }
        *n = quot;
        e += 1;
    }
}

/// Product of the distinct primes dividing `a`; `radical(1) = 1`.
pub fn radical(a: &BigInt) -> Result<BigInt> {
    if !a.is_positive() {
        return Err(Error::NotPositive(a.to_string()));
    }
    Ok(prime_factors(a).into_iter().map(|(p, _)| p).product())
}

/// Full factorization by trial division, with a primality shortcut on the
/// cofactor. Intended for desk-scale inputs only.
pub fn prime_factors(a: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = a.abs();
    let mut out = Vec::new();
    if n <= BigInt::one() {
        return out;
    }
    let two = BigInt::from(2);
    let e = strip_factor(&mut n, &two);
    if e > 0 {
        out.push((two, e));
    }
    let mut q = BigInt::from(3);
    while &q * &q <= n {
        if is_prime(&n) {
            break;
        }
        let e = strip_factor(&mut n, &q);
        if e > 0 {
            out.push((q.clone(), e));
        }
        q += 2;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// `(⌊a^(1/n)⌋, exact)` where `exact` holds iff the root raised to `n` is `a`.
///
/// Negative `a` is accepted for odd `n`; the floor is then taken toward
/// negative infinity.
pub fn nth_root_floor(a: &BigInt, n: u32) -> Result<(BigInt, bool)> {
    if n == 0 {
        return Err(Error::ZeroRootIndex);
    }
    if a.is_negative() {
        if n.is_multiple_of(2) {
            return Err(Error::NegativeEvenRoot { n, value: a.to_string() });
        }
        let mut r = -(a.abs().nth_root(n));
        if num_traits::pow(r.clone(), n as usize) > *a {
            r -= 1;
        }
        let exact = num_traits::pow(r.clone(), n as usize) == *a;
        return Ok((r, exact));
    }
    let r = a.nth_root(n);
    let exact = num_traits::pow(r.clone(), n as usize) == *a;
    Ok((r, exact))
}

/// Exact square root if `a` is a perfect square.
pub fn exact_sqrt(a: &BigInt) -> Option<BigInt> {
    if a.is_negative() {
        return None;
    }
    // squares are 0, 1, 4, 9 mod 16
    let low = (a & BigInt::from(15)).to_u8().unwrap_or(0);
    if !matches!(low, 0 | 1 | 4 | 9) {
        return None;
    }
    let r = a.sqrt();
    (&r * &r == *a).then_some(r)
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin with the first thirteen prime bases. Deterministic below
/// 3.3 * 10^24, which covers every value the search produces.
pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigInt::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let s = strip_factor(&mut d, &BigInt::from(2));
    'witness: for &b in &MR_BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A decomposition `2^(2α) 5^(2β) p^(2γ)` of the middle term, with `p` an odd
/// prime other than 5 present exactly when `γ > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PowerShape {
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    #[serde(with = "crate::serde_str::opt")]
    pub p: Option<BigInt>,
}

impl PowerShape {
    pub fn new(alpha: u32, beta: u32, gamma: u32, p: Option<BigInt>) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::Precondition("alpha must be at least 1".into()));
        }
        match (&p, gamma) {
            (None, 0) => {}
            (Some(p), g) if g > 0 => {
                if p == &BigInt::from(2) || p == &BigInt::from(5) || !is_prime(p) {
                    return Err(Error::Precondition(format!(
                        "p = {p} must be an odd prime other than 5"
                    )));
                }
            }
            _ => {
                return Err(Error::Precondition(
                    "p must be present exactly when gamma > 0".into(),
                ))
            }
        }
        Ok(Self { alpha, beta, gamma, p })
    }

    /// `2^(2α) 5^(2β) p^(2γ)`.
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::one() << (2 * self.alpha as usize);
        v *= num_traits::pow(BigInt::from(5), 2 * self.beta as usize);
        if let Some(p) = &self.p {
            v *= num_traits::pow(p.clone(), 2 * self.gamma as usize);
        }
        v
    }
}

impl fmt::Display for PowerShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} beta={} gamma={} p=", self.alpha, self.beta, self.gamma)?;
        match &self.p {
            Some(p) => write!(f, "{p}"),
            None => f.write_str("-"),
        }
    }
}

/// Recognizes `y2 = 2^(2α) 5^(2β) p^(2γ)` with `α >= 1`, using
/// [`DEFAULT_TRIAL_BOUND`].
pub fn power_shape(y2: &BigInt) -> Result<Option<PowerShape>> {
    power_shape_with_bound(y2, DEFAULT_TRIAL_BOUND)
}

/// [`power_shape`] with an explicit trial-division bound. Factors of the odd
/// part above the bound are found by a primality test or a perfect-power
/// test, so the answer does not depend on the bound.
pub fn power_shape_with_bound(y2: &BigInt, trial_bound: u64) -> Result<Option<PowerShape>> {
    if !y2.is_positive() {
        return Err(Error::NotPositive(y2.to_string()));
    }
    let mut m = y2.clone();
    let twos = strip_factor(&mut m, &BigInt::from(2));
    if twos == 0 || twos % 2 == 1 {
        return Ok(None);
    }
    let fives = strip_factor(&mut m, &BigInt::from(5));
    if fives % 2 == 1 {
        return Ok(None);
    }
    let (alpha, beta) = (twos / 2, fives / 2);
    if m.is_one() {
        return Ok(Some(PowerShape { alpha, beta, gamma: 0, p: None }));
    }
    let Some(s) = exact_sqrt(&m) else {
        return Ok(None);
    };
    Ok(prime_power(&s, trial_bound).map(|(p, gamma)| PowerShape {
        alpha,
        beta,
        gamma,
        p: Some(p),
    }))
}

/// Writes an odd `s > 1` coprime to 5 as `p^e` with `p` prime, if possible.
fn prime_power(s: &BigInt, trial_bound: u64) -> Option<(BigInt, u32)> {
    let mut q = 3u64;
    while q <= trial_bound {
        let qb = BigInt::from(q);
        if &qb * &qb > *s {
            // no factor up to sqrt(s): s is prime
            return Some((s.clone(), 1));
        }
        if (s % &qb).is_zero() {
            let mut rest = s.clone();
            let e = strip_factor(&mut rest, &qb);
            return rest.is_one().then_some((qb, e));
        }
        q += 2;
    }
    if is_prime(s) {
        return Some((s.clone(), 1));
    }
    // every prime factor exceeds the bound; only a pure power of one prime qualifies
    let bits = s.bits() as u32;
    (2..=bits).rev().find_map(|e| {
        let (r, exact) = nth_root_floor(s, e).ok()?;
        (exact && is_prime(&r)).then_some((r, e))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&b(41), &b(5)).unwrap(), b(1));
        assert_eq!(gcd(&b(0), &b(7)).unwrap(), b(7));
        assert_eq!(gcd(&b(-12), &b(18)).unwrap(), b(6));
        assert_eq!(gcd(&b(0), &b(0)), Err(Error::GcdOfZeros));
    }

    #[test]
    fn gcd_of_example_middle_term() {
        // 1444 = 2^2 19^2, 3125 = 5^5
        assert_eq!(prime_factors(&b(1444)), vec![(b(2), 2), (b(19), 2)]);
        assert_eq!(prime_factors(&b(3125)), vec![(b(5), 5)]);
        assert_eq!(gcd(&b(1444), &b(3125)).unwrap(), b(1));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&b(2), &b(1444)).unwrap(), 2);
        assert_eq!(valuation(&b(5), &b(3125)).unwrap(), 5);
        assert_eq!(valuation(&b(7), &b(1)).unwrap(), 0);
        assert_eq!(valuation(&b(3), &b(-81)).unwrap(), 4);
        assert_eq!(valuation(&b(7), &b(0)), Err(Error::ZeroValuation));
        assert!(matches!(valuation(&b(6), &b(12)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&b(320)).unwrap(), b(10));
        assert_eq!(radical(&b(1)).unwrap(), b(1));
        assert_eq!(radical(&b(19)).unwrap(), b(19));
        assert!(radical(&b(0)).is_err());
        assert!(radical(&b(-4)).is_err());
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(nth_root_floor(&b(3125), 5).unwrap(), (b(5), true));
        assert_eq!(nth_root_floor(&b(3124), 5).unwrap(), (b(4), false));
        assert_eq!(nth_root_floor(&b(1), 9).unwrap(), (b(1), true));
        assert_eq!(nth_root_floor(&b(-27), 3).unwrap(), (b(-3), true));
        assert_eq!(nth_root_floor(&b(-28), 3).unwrap(), (b(-4), false));
        assert!(matches!(nth_root_floor(&b(-4), 2), Err(Error::NegativeEvenRoot { .. })));
        assert_eq!(nth_root_floor(&b(4), 0), Err(Error::ZeroRootIndex));
    }

    #[test]
    fn nth_root_thousands_of_bits() {
        let base: BigInt = (BigInt::one() << 1500usize) + 12345;
        let a = num_traits::pow(base.clone(), 7);
        assert_eq!(nth_root_floor(&a, 7).unwrap(), (base.clone(), true));
        assert_eq!(nth_root_floor(&(a - 1), 7).unwrap(), (base - 1, false));
    }

    #[test]
    fn power_shape_examples() {
        let s = power_shape(&b(1444)).unwrap().unwrap();
        assert_eq!(s, PowerShape { alpha: 1, beta: 0, gamma: 1, p: Some(b(19)) });
        let s = power_shape(&b(100)).unwrap().unwrap();
        assert_eq!(s, PowerShape { alpha: 1, beta: 1, gamma: 0, p: None });
        assert_eq!(power_shape(&b(12)).unwrap(), None);
    }

    #[test]
    fn power_shape_rejections() {
        assert!(power_shape(&b(0)).is_err());
        assert!(power_shape(&b(-100)).is_err());
        // no factor of 2
        assert_eq!(power_shape(&b(25)).unwrap(), None);
        // odd power of 5
        assert_eq!(power_shape(&b(4 * 5)).unwrap(), None);
        // two distinct odd primes
        assert_eq!(power_shape(&b(4 * 9 * 49)).unwrap(), None);
        // odd exponent on p
        assert_eq!(power_shape(&b(4 * 27)).unwrap(), None);
    }

    #[test]
    fn power_shape_folds_five_into_beta() {
        let s = power_shape(&b(4 * 625)).unwrap().unwrap();
        assert_eq!((s.beta, s.gamma, s.p), (2, 0, None));
    }

    #[test]
    fn power_shape_independent_of_trial_bound() {
        // 10007 is prime and beyond a bound of 100
        let p = b(10007);
        let y2 = b(16) * num_traits::pow(p.clone(), 6);
        let expect = PowerShape { alpha: 2, beta: 0, gamma: 3, p: Some(p.clone()) };
        for bound in [3, 100, DEFAULT_TRIAL_BOUND, 20_000] {
            assert_eq!(power_shape_with_bound(&y2, bound).unwrap(), Some(expect.clone()));
        }
        let composite = b(16) * num_traits::pow(b(10007) * b(10009), 2);
        assert_eq!(power_shape_with_bound(&composite, 100).unwrap(), None);
    }

    #[test]
    fn shape_constructor_validates() {
        assert!(PowerShape::new(0, 0, 0, None).is_err());
        assert!(PowerShape::new(1, 0, 1, None).is_err());
        assert!(PowerShape::new(1, 0, 0, Some(b(3))).is_err());
        assert!(PowerShape::new(1, 0, 1, Some(b(5))).is_err());
        assert!(PowerShape::new(1, 0, 1, Some(b(9))).is_err());
        assert_eq!(PowerShape::new(1, 0, 1, Some(b(19))).unwrap().value(), b(1444));
    }

    #[test]
    fn primality_small_table() {
        let sieve: Vec<u32> = (0..2000).filter(|&n| n >= 2 && (2..n).all(|d| n % d != 0)).collect();
        for n in 0..2000u32 {
            assert_eq!(is_prime(&BigInt::from(n)), sieve.contains(&n), "n = {n}");
        }
        // Carmichael numbers
        for c in [561u64, 41041, 825265, 321197185] {
            assert!(!is_prime(&BigInt::from(c)));
        }
    }
}
