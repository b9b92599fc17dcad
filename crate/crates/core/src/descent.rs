//! The quintic parametrization of primitive solutions of `x^2 + y^2 = z^5`.
//!
//! Every primitive solution comes from a coprime pair `(u, v)` of opposite
//! parity through
//!
//! ```text
//! x = u (u^4 - 10 u^2 v^2 + 5 v^4)
//! y = v (v^4 - 10 u^2 v^2 + 5 u^4)
//! z = u^2 + v^2
//! ```
//!
//! which is the real and imaginary part of `(u + i v)^5`. The module also
//! carries a brute-force enumerator over `x` that knows nothing about the
//! parametrization, and a report comparing the two.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use crate::arith::{exact_sqrt, gcd};
use crate::error::{Error, Result};

/// Descent parameters: coprime and of opposite parity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UVPair {
    u: BigInt,
    v: BigInt,
}

impl UVPair {
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>) -> Result<Self> {
        let (u, v) = (u.into(), v.into());
        if u.is_zero() && v.is_zero() {
            return Err(Error::Precondition("(u, v) = (0, 0)".into()));
        }
        if !gcd(&u, &v)?.is_one() {
            return Err(Error::Precondition(format!("gcd({u}, {v}) != 1")));
        }
        if u.is_odd() == v.is_odd() {
            return Err(Error::Precondition(format!("{u} and {v} have equal parity")));
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    /// True for `(±1, 0)` and `(0, ±1)`, which the proof excludes by requiring
    /// nonzero parameters.
    pub fn is_degenerate(&self) -> bool {
        self.u.is_zero() || self.v.is_zero()
    }

    pub fn quartic_x(&self) -> BigInt {
        quartic_x(&self.u, &self.v)
    }

    pub fn quartic_y(&self) -> BigInt {
        quartic_y(&self.u, &self.v)
    }
}

/// `u^4 - 10 u^2 v^2 + 5 v^4`, the cofactor of `u` in `x`.
pub fn quartic_x(u: &BigInt, v: &BigInt) -> BigInt {
    let (u2, v2) = (u * u, v * v);
    &u2 * &u2 - 10 * &u2 * &v2 + 5 * &v2 * &v2
}

/// `v^4 - 10 u^2 v^2 + 5 u^4`, the cofactor of `v` in `y`.
pub fn quartic_y(u: &BigInt, v: &BigInt) -> BigInt {
    quartic_x(v, u)
}

/// A solution of `x^2 + y^2 = z^5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuinticSolution {
    #[serde(with = "crate::serde_str")]
    pub x: BigInt,
    #[serde(with = "crate::serde_str")]
    pub y: BigInt,
    #[serde(with = "crate::serde_str")]
    pub z: BigInt,
}

impl QuinticSolution {
    pub fn new(x: BigInt, y: BigInt, z: BigInt) -> Result<Self> {
        let s = Self { x, y, z };
        if !s.holds() {
            return Err(Error::Precondition(format!("{s} does not satisfy x^2 + y^2 = z^5")));
        }
        Ok(s)
    }

    pub fn holds(&self) -> bool {
        &self.x * &self.x + &self.y * &self.y == num_traits::pow(self.z.clone(), 5)
    }

    /// `gcd(x, y) = 1`.
    pub fn is_primitive(&self) -> bool {
        gcd(&self.x, &self.y).map(|g| g.is_one()).unwrap_or(false)
    }

    /// Representative of the sign orbit `(±x, ±y, z)`: both coordinates
    /// non-negative.
    pub fn canonical(&self) -> Self {
        Self { x: self.x.abs(), y: self.y.abs(), z: self.z.clone() }
    }

    fn sort_key(&self) -> (BigInt, BigInt, BigInt) {
        (self.z.clone(), self.x.abs(), self.y.abs())
    }
}

impl fmt::Display for QuinticSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.x, self.y, self.z)
    }
}

impl PartialOrd for QuinticSolution {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuinticSolution {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| (&self.x, &self.y).cmp(&(&other.x, &other.y)))
    }
}

/// `(u·quartic_x, v·quartic_y, u^2 + v^2)`.
pub fn parametrize(pair: &UVPair) -> QuinticSolution {
    QuinticSolution {
        x: pair.u() * pair.quartic_x(),
        y: pair.v() * pair.quartic_y(),
        z: pair.u() * pair.u() + pair.v() * pair.v(),
    }
}

/// Result of sweeping the parametrization over a range of `z`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Enumeration {
    /// Canonical primitive solutions, sorted by `(z, |x|, |y|)`.
    pub solutions: Vec<QuinticSolution>,
    /// Coprime opposite-parity pairs visited, counting `(u, v)` and `(-u, -v)` once.
    pub pairs: u64,
    /// Pairs whose triple failed the primitivity filter.
    pub non_primitive: u64,
}

fn bound_u64(z_max: &BigInt) -> Result<u64> {
    if *z_max < BigInt::from(1) {
        return Err(Error::Precondition(format!("z_max = {z_max} must be at least 1")));
    }
    z_max
        .to_u64()
        .ok_or_else(|| Error::Precondition(format!("z_max = {z_max} is beyond desk scale")))
}

/// Canonical primitive solutions with `z <= z_max` obtained from the
/// parametrization, degenerate pairs included.
pub fn enumerate_primitive(z_max: &BigInt) -> Result<Vec<QuinticSolution>> {
    Ok(enumerate_parametrized(1..=bound_u64(z_max)?).solutions)
}

/// Sweeps every coprime opposite-parity `(u, v)` with `u^2 + v^2` in `z_range`.
pub fn enumerate_parametrized(z_range: RangeInclusive<u64>) -> Enumeration {
    let (lo, hi) = (*z_range.start(), *z_range.end());
    let r = (hi as f64).sqrt() as i64 + 1;
    let mut seen = BTreeSet::new();
    let mut out = Enumeration::default();
    for u in 0..=r {
        for v in -r..=r {
            // (u, v) ~ (-u, -v): keep u > 0, or u = 0 with v > 0
            if u == 0 && v <= 0 {
                continue;
            }
            let z = (u * u + v * v) as u64;
            if z < lo || z > hi || (u + v) % 2 == 0 || num_integer::gcd(u, v) != 1 {
                continue;
            }
            out.pairs += 1;
            let pair = UVPair { u: BigInt::from(u), v: BigInt::from(v) };
            let sol = parametrize(&pair);
            debug_assert!(sol.holds());
            if !sol.is_primitive() {
                out.non_primitive += 1;
                continue;
            }
            seen.insert(sol.canonical());
        }
    }
    out.solutions = seen.into_iter().collect();
    out
}

/// Brute-force primitive solutions with `z <= z_max`: for every `z` and every
/// `0 <= x <= z^(5/2)`, test whether `z^5 - x^2` is a perfect square.
pub fn oracle_enumerate(z_max: &BigInt) -> Result<Vec<QuinticSolution>> {
    Ok(oracle_enumerate_range(1..=bound_u64(z_max)?))
}

pub fn oracle_enumerate_range(z_range: RangeInclusive<u64>) -> Vec<QuinticSolution> {
    let mut out = BTreeSet::new();
    for z in z_range {
        let z = BigInt::from(z);
        let z5 = num_traits::pow(z.clone(), 5);
        let mut x = BigInt::zero();
        while &x * &x <= z5 {
            if let Some(y) = exact_sqrt(&(&z5 - &x * &x)) {
                let sol = QuinticSolution { x: x.clone(), y, z: z.clone() };
                if sol.is_primitive() {
                    out.insert(sol);
                }
            }
            x += 1;
        }
    }
    out.into_iter().collect()
}

/// Set comparison between the parametrized sweep and the brute-force oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub z_max: u64,
    pub parametrized: Vec<QuinticSolution>,
    pub oracle: Vec<QuinticSolution>,
    /// Found by the oracle, missed by the parametrization.
    pub missing_from_parametrization: Vec<QuinticSolution>,
    /// Produced by the parametrization, not confirmed by the oracle.
    pub missing_from_oracle: Vec<QuinticSolution>,
    pub non_primitive_excluded: u64,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.missing_from_parametrization.is_empty() && self.missing_from_oracle.is_empty()
    }

    /// Number of sign orbits at each `z` that has any.
    pub fn classes_by_z(&self) -> Vec<(BigInt, usize)> {
        let mut out: Vec<(BigInt, usize)> = Vec::new();
        for s in &self.parametrized {
            match out.last_mut() {
                Some((z, n)) if *z == s.z => *n += 1,
                _ => out.push((s.z.clone(), 1)),
            }
        }
        out
    }
}

pub fn completeness_report(z_max: &BigInt) -> Result<CompletenessReport> {
    let z_max = bound_u64(z_max)?;
    let enumeration = enumerate_parametrized(1..=z_max);
    let oracle = oracle_enumerate_range(1..=z_max);
    let param: BTreeSet<_> = enumeration.solutions.iter().cloned().collect();
    let orc: BTreeSet<_> = oracle.iter().cloned().collect();
    Ok(CompletenessReport {
        z_max,
        missing_from_parametrization: orc.difference(&param).cloned().collect(),
        missing_from_oracle: param.difference(&orc).cloned().collect(),
        parametrized: enumeration.solutions,
        oracle,
        non_primitive_excluded: enumeration.non_primitive,
    })
}
