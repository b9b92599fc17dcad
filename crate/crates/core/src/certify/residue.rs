//! Residue evaluation of the fixed polynomial expressions the certificates
//! reduce, and finite exponent windows for quantifiers like "for all α >= 1".

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Free symbols appearing in the certified expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    X,
    Z,
    U,
    V,
    P,
    Alpha,
    Beta,
    Gamma,
    J,
    K,
    KPrime,
    L,
    LPrime,
    /// Residue of `B^n`, for branches where only the power matters.
    BPow,
    B,
    N,
    /// Which of `ℓ, ℓ'` carries `4γ`: 0 means `ℓ = 4γ`, 1 means `ℓ' = 4γ`.
    Split,
}

impl Symbol {
    pub fn name(self) -> &'static str {
        match self {
            Symbol::X => "x",
            Symbol::Z => "z",
            Symbol::U => "u",
            Symbol::V => "v",
            Symbol::P => "p",
            Symbol::Alpha => "alpha",
            Symbol::Beta => "beta",
            Symbol::Gamma => "gamma",
            Symbol::J => "j",
            Symbol::K => "k",
            Symbol::KPrime => "k'",
            Symbol::L => "l",
            Symbol::LPrime => "l'",
            Symbol::BPow => "B^n",
            Symbol::B => "B",
            Symbol::N => "n",
            Symbol::Split => "split",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        use Symbol::*;
        [X, Z, U, V, P, Alpha, Beta, Gamma, J, K, KPrime, L, LPrime, BPow, B, N, Split]
            .into_iter()
            .find(|sym| sym.name() == s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The expressions `residue_reduce` knows how to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyId {
    /// `5^(2β) p^(2γ)`
    Eq7Lhs,
    /// `5^(j+1) x^8 + 2^(2α+1) 5^(2j+1) x^6 + 2^(4α+1) 5^(3j+1) x^4
    ///  + 2^(6α) 5^(4j+1) x^2 + 2^(8α) 5^(5j)`
    Eq7Rhs,
    /// `u^4 - 10 u^2 v^2 + 5 v^4`
    QuarticX,
    /// `v^4 - 10 u^2 v^2 + 5 u^4`
    QuarticY,
    /// `z^4 + z^3 x^2 + z^2 x^4 + z x^6 + x^8`
    N5Cofactor,
    /// `5^k p^ℓ - 2^(4α) 5^(k') p^(ℓ')`
    Eq3Lhs,
    /// `5 B^n`, with `B^n` supplied as a residue
    FiveBPow,
    /// `B^n + 2^(4α+2) 5^(4k+1)`
    Eq16Lhs,
    /// `(u^2 - 5 v^2)^2`
    W2Squared,
}

impl PolyId {
    pub fn symbols(self) -> &'static [Symbol] {
        use Symbol::*;
        match self {
            PolyId::Eq7Lhs => &[Beta, P, Gamma],
            PolyId::Eq7Rhs => &[X, J, Alpha],
            PolyId::QuarticX | PolyId::QuarticY | PolyId::W2Squared => &[U, V],
            PolyId::N5Cofactor => &[X, Z],
            PolyId::Eq3Lhs => &[K, KPrime, P, L, LPrime, Alpha],
            PolyId::FiveBPow => &[BPow],
            PolyId::Eq16Lhs => &[B, N, Alpha, K],
        }
    }
}

/// Values bound to symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Symbol, i64>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, sym: Symbol, value: i64) -> Self {
        self.0.insert(sym, value);
        self
    }

    pub fn set(&mut self, sym: Symbol, value: i64) {
        self.0.insert(sym, value);
    }

    pub fn get(&self, sym: Symbol) -> Result<i64> {
        self.0
            .get(&sym)
            .copied()
            .ok_or_else(|| Error::MissingAssignment(sym.name().to_string()))
    }
}

impl<const N: usize> From<[(Symbol, i64); N]> for Assignment {
    fn from(pairs: [(Symbol, i64); N]) -> Self {
        Self(pairs.into_iter().collect())
    }
}

/// `base^exp mod m` for `exp >= 0`.
pub fn pow_mod(base: i64, exp: i64, m: u64) -> Result<u64> {
    if exp < 0 {
        return Err(Error::Precondition(format!("negative exponent {exp}")));
    }
    let m = m as u128;
    let mut b = (base as i128).rem_euclid(m as i128) as u128;
    let mut e = exp as u64;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    Ok(acc as u64)
}

/// Exact residue in `[0, m)` of `poly` at `assignment`.
pub fn residue_reduce(poly: PolyId, modulus: u64, assignment: &Assignment) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::Precondition(format!("modulus {modulus} must be at least 2")));
    }
    let m = modulus as i128;
    let get = |s| assignment.get(s);
    let pw = |b: i64, e: i64| pow_mod(b, e, modulus).map(|r| r as i128);
    let red = |v: i128| v.rem_euclid(m);
    let value = match poly {
        PolyId::Eq7Lhs => {
            let (beta, p, gamma) = (get(Symbol::Beta)?, get(Symbol::P)?, get(Symbol::Gamma)?);
            pw(5, 2 * beta)? * pw(p, 2 * gamma)?
        }
        PolyId::Eq7Rhs => {
            let (x, j, a) = (get(Symbol::X)?, get(Symbol::J)?, get(Symbol::Alpha)?);
            let terms = [
                (0, j + 1, 8),
                (2 * a + 1, 2 * j + 1, 6),
                (4 * a + 1, 3 * j + 1, 4),
                (6 * a, 4 * j + 1, 2),
                (8 * a, 5 * j, 0),
            ];
            let mut acc = 0i128;
            for (e2, e5, ex) in terms {
                acc = red(acc + red(pw(2, e2)? * pw(5, e5)?) * pw(x, ex)?);
            }
            acc
        }
        PolyId::QuarticX | PolyId::QuarticY | PolyId::W2Squared => {
            let (mut u, mut v) = (get(Symbol::U)? as i128, get(Symbol::V)? as i128);
            if poly == PolyId::QuarticY {
                std::mem::swap(&mut u, &mut v);
            }
            let (u2, v2) = (red(u * u), red(v * v));
            if poly == PolyId::W2Squared {
                let w = red(u2 - 5 * v2);
                w * w
            } else {
                red(u2 * u2) - red(10 * u2 * v2) + red(5 * v2 * v2)
            }
        }
        PolyId::N5Cofactor => {
            let (x, z) = (get(Symbol::X)?, get(Symbol::Z)?);
            let mut acc = 0i128;
            for i in 0..=4 {
                acc = red(acc + pw(z, 4 - i)? * pw(x, 2 * i)?);
            }
            acc
        }
        PolyId::Eq3Lhs => {
            let (k, kp, p) = (get(Symbol::K)?, get(Symbol::KPrime)?, get(Symbol::P)?);
            let (l, lp, a) = (get(Symbol::L)?, get(Symbol::LPrime)?, get(Symbol::Alpha)?);
            red(pw(5, k)? * pw(p, l)?) - red(red(pw(2, 4 * a)? * pw(5, kp)?) * pw(p, lp)?)
        }
        PolyId::FiveBPow => 5 * red(get(Symbol::BPow)? as i128),
        PolyId::Eq16Lhs => {
            let (b, n, a, k) =
                (get(Symbol::B)?, get(Symbol::N)?, get(Symbol::Alpha)?, get(Symbol::K)?);
            pw(b, n)? + red(pw(2, 4 * a + 2)? * pw(5, 4 * k + 1)?)
        }
    };
    Ok(red(value) as u64)
}

/// Eventual periodicity of `e -> base^e mod m`: the sequence is periodic with
/// the given period for every `e >= preperiod`. Found by walking the finite
/// state space until a residue repeats, so it is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerCycle {
    pub preperiod: u64,
    pub period: u64,
}

pub fn power_cycle(base: i64, modulus: u64) -> PowerCycle {
    let mut first_seen = BTreeMap::new();
    let mut r = 1 % modulus;
    let b = base.rem_euclid(modulus as i64) as u64;
    for e in 0.. {
        if let Some(&start) = first_seen.get(&r) {
            return PowerCycle { preperiod: start, period: e - start };
        }
        first_seen.insert(r, e);
        r = ((r as u128 * b as u128) % modulus as u128) as u64;
    }
    unreachable!()
}

/// An exponent `coef * s + offset` with one of several bases, as a function of
/// an enumerated symbol `s`.
#[derive(Debug, Clone, Copy)]
pub struct ExponentTerm {
    pub base: i64,
    pub coef: u64,
    pub offset: i64,
}

/// Finite set of values for a symbol `s >= min` such that every residue
/// vector `(base_i^(coef_i s + offset_i) mod m)_i` attained for some `s >= min`
/// is attained inside the window.
///
/// Once every exponent is past its base's preperiod, shifting `s` by
/// `period / gcd(period, coef)` leaves that term's residue fixed; the window
/// spans the lcm of those shifts.
pub fn exponent_window(terms: &[ExponentTerm], modulus: u64, min: i64) -> Vec<i64> {
    let mut start = min;
    let mut period = 1u64;
    for t in terms {
        let c = power_cycle(t.base, modulus);
        // smallest s with coef*s + offset >= preperiod
        if t.coef > 0 {
            let need = c.preperiod as i64 - t.offset;
            let s = if need <= 0 { i64::MIN } else { (need + t.coef as i64 - 1) / t.coef as i64 };
            start = start.max(s);
        }
        let shift = if t.coef == 0 { 1 } else { c.period / num_integer::gcd(c.period, t.coef) };
        period = num_integer::lcm(period, shift);
    }
    (min..start + period as i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Symbol::*;

    #[test]
    fn reduce_examples() {
        let a = Assignment::from([(X, 1), (J, 0), (Alpha, 1)]);
        assert_eq!(residue_reduce(PolyId::Eq7Rhs, 8, &a).unwrap(), 5);
        let a = Assignment::from([(U, 1), (V, 0)]);
        assert_eq!(residue_reduce(PolyId::QuarticY, 5, &a).unwrap(), 0);
        let a = Assignment::from([(U, 3), (V, 2)]);
        assert_eq!(residue_reduce(PolyId::QuarticX, 8, &a).unwrap(), 1);
        assert_eq!(81 - 360 + 80, -199);
    }

    #[test]
    fn missing_assignment_is_an_error() {
        let a = Assignment::from([(X, 1), (Alpha, 1)]);
        assert_eq!(
            residue_reduce(PolyId::Eq7Rhs, 8, &a),
            Err(Error::MissingAssignment("j".into()))
        );
        assert!(residue_reduce(PolyId::QuarticX, 1, &Assignment::from([(U, 1), (V, 1)])).is_err());
    }

    #[test]
    fn eq7_rhs_matches_integer_evaluation() {
        // exact value for small parameters, reduced afterwards
        for x in 1..6i64 {
            for j in 0..3u32 {
                for a in 1..3u32 {
                    let p = |b: i128, e: u32| b.pow(e);
                    let xi = x as i128;
                    let exact = p(5, j + 1) * p(xi, 8)
                        + p(2, 2 * a + 1) * p(5, 2 * j + 1) * p(xi, 6)
                        + p(2, 4 * a + 1) * p(5, 3 * j + 1) * p(xi, 4)
                        + p(2, 6 * a) * p(5, 4 * j + 1) * p(xi, 2)
                        + p(2, 8 * a) * p(5, 5 * j);
                    let asg = Assignment::from([(X, x), (J, j as i64), (Alpha, a as i64)]);
                    for m in [3u64, 8, 25, 97] {
                        let r = residue_reduce(PolyId::Eq7Rhs, m, &asg).unwrap();
                        assert_eq!(r as i128, exact.rem_euclid(m as i128));
                    }
                }
            }
        }
    }

    #[test]
    fn power_cycles() {
        assert_eq!(power_cycle(2, 8), PowerCycle { preperiod: 3, period: 1 });
        assert_eq!(power_cycle(2, 5), PowerCycle { preperiod: 0, period: 4 });
        assert_eq!(power_cycle(5, 5), PowerCycle { preperiod: 1, period: 1 });
        assert_eq!(power_cycle(3, 8), PowerCycle { preperiod: 0, period: 2 });
        assert_eq!(power_cycle(0, 3), PowerCycle { preperiod: 1, period: 1 });
    }

    #[test]
    fn powers_of_two_stabilize_mod_8() {
        // constant for all e >= log2(8)
        for e in 3..200 {
            assert_eq!(pow_mod(2, e, 8).unwrap(), 0);
        }
    }

    #[test]
    fn window_covers_all_residue_vectors() {
        let terms = [
            ExponentTerm { base: 2, coef: 2, offset: 1 },
            ExponentTerm { base: 3, coef: 4, offset: 0 },
            ExponentTerm { base: 5, coef: 1, offset: -1 },
        ];
        for m in [3u64, 5, 8, 12, 25] {
            let w = exponent_window(&terms, m, 1);
            let vec_at = |s: i64| -> Vec<u64> {
                terms
                    .iter()
                    .map(|t| pow_mod(t.base, t.coef as i64 * s + t.offset, m).unwrap())
                    .collect()
            };
            let inside: std::collections::BTreeSet<_> = w.iter().map(|&s| vec_at(s)).collect();
            for s in 1..300 {
                assert!(inside.contains(&vec_at(s)), "m = {m}, s = {s}");
            }
        }
    }
}
