//! Level bookkeeping for `B^7 + C (2^s1 5^s2)^7 = w^2`.
//!
//! The coefficient `2^(4α+2) 5^(4k+1)` is split into a seventh-power-free part
//! `C = 2^r1 5^r2` and a seventh power, and `C` is assigned the level
//!
//! ```text
//! N7(C) = 2 rad(C)    if v2(C) = 0
//!         rad(C) / 2  if v2(C) = 6
//!         rad(C)      otherwise
//! ```
//!
//! Whether a level carries weight-2 newforms is looked up in a bundled table,
//! never computed.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{prime_factors, radical, valuation};
use crate::error::{Error, Result};

/// Status of one hypothesis of the level result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    /// Verified directly for this computation.
    Checked,
    /// Discharged by the named residue certificates.
    Certified(Vec<String>),
    /// Supplied by the descent, not re-checked here.
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub statement: String,
    pub status: HypothesisStatus,
}

/// The rewrite `2^(4α+2) 5^(4k+1) = C (2^s1 5^s2)^7` and the level of `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelComputation {
    pub alpha: u32,
    pub k: u32,
    #[serde(with = "crate::serde_str")]
    pub c: BigInt,
    pub r1: u32,
    pub r2: u32,
    pub s1: u32,
    pub s2: u32,
    pub v2c: u32,
    #[serde(with = "crate::serde_str")]
    pub level: BigInt,
    pub hypotheses: Vec<Hypothesis>,
}

impl LevelComputation {
    /// `2^(4α+2) 5^(4k+1)`.
    pub fn coefficient(&self) -> BigInt {
        BigInt::from(2).pow(4 * self.alpha + 2) * BigInt::from(5).pow(4 * self.k + 1)
    }

    /// `C (2^s1 5^s2)^7`.
    pub fn reconstructed(&self) -> BigInt {
        let seventh = BigInt::from(2).pow(self.s1) * BigInt::from(5).pow(self.s2);
        &self.c * seventh.pow(7)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("level serialization is infallible")
    }
}

/// Splits `2^(4α+2) 5^(4k+1)` into `C = 2^r1 5^r2` with `r1, r2 < 7` times a
/// seventh power, then computes the level of `C`.
pub fn rewrite_seventh(alpha: u32, k: u32) -> Result<LevelComputation> {
    if alpha < 1 {
        return Err(Error::Precondition("alpha must be at least 1".into()));
    }
    let (e2, e5) = (4 * alpha + 2, 4 * k + 1);
    let (r1, s1, r2, s2) = (e2 % 7, e2 / 7, e5 % 7, e5 / 7);
    let c = BigInt::from(2).pow(r1) * BigInt::from(5).pow(r2);
    let level = bs_level(&c)?;
    // w = u^2 - 5 v^2 with u odd, v even, reduced mod 4
    let w_mod4: BTreeSet<i64> = [1i64, 3]
        .iter()
        .flat_map(|u| [0i64, 2].map(|v| (u * u - 5 * v * v).rem_euclid(4)))
        .collect();
    let hyp = |s: &str, status| Hypothesis { statement: s.into(), status };
    let mut hypotheses = vec![
        hyp("v_q(C) < 7 for all primes q", HypothesisStatus::Checked),
        hyp(
            "B₂ ∉ {−1, +1}",
            HypothesisStatus::Certified(vec!["NOT5U_N7_MOD3".into(), "NOT5U_N7_MOD8".into()]),
        ),
        hyp("B₂, C·y, w₂ nonzero and pairwise coprime", HypothesisStatus::Assumed),
    ];
    if w_mod4 == BTreeSet::from([1]) {
        hypotheses.push(hyp("w₂ ≡ 1 (mod 4)", HypothesisStatus::Checked));
    }
    if e2 >= 6 {
        hypotheses.push(hyp("v₂(C·y⁷) = 4α + 2 ≥ 6", HypothesisStatus::Checked));
    }
    Ok(LevelComputation { alpha, k, c, r1, r2, s1, s2, v2c: r1, level, hypotheses })
}

/// Level `N7(C)`. Every prime must divide `C` to a power below 7.
pub fn bs_level(c: &BigInt) -> Result<BigInt> {
    if !c.is_positive() {
        return Err(Error::NotPositive(c.to_string()));
    }
    if let Some((q, e)) = prime_factors(c).into_iter().find(|&(_, e)| e >= 7) {
        return Err(Error::LevelHypothesis { c: c.to_string(), prime: q.to_string(), valuation: e });
    }
    let rad = radical(c)?;
    Ok(match valuation(&BigInt::from(2), c)? {
        0 => rad * 2,
        6 => rad / 2,
        _ => rad,
    })
}

/// All levels reached for `1 <= α <= alpha_max`, `0 <= k <= k_max`.
pub fn n7_level_set(alpha_max: u32, k_max: u32) -> Result<BTreeSet<BigInt>> {
    if alpha_max < 1 {
        return Err(Error::Precondition("alpha_max must be at least 1".into()));
    }
    let mut out = BTreeSet::new();
    for alpha in 1..=alpha_max {
        for k in 0..=k_max {
            out.insert(rewrite_seventh(alpha, k)?.level);
        }
    }
    Ok(out)
}

const BUNDLED_TABLE: &str = include_str!("../data/newform_levels.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub has_newforms: bool,
    pub provenance: String,
}

/// Which levels admit weight-2 newforms, as shipped in a versioned data file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformTable {
    pub version: u32,
    rows: BTreeMap<u64, TableRow>,
}

impl NewformTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TABLE).expect("bundled newform table is well-formed")
    }

    /// Tab-separated rows `level has_newforms provenance`; `#` starts a
    /// comment and the first comment must carry `version N`. Levels must form
    /// a contiguous range starting at 1.
    pub fn parse(text: &str) -> Result<Self> {
        let mut version = None;
        let mut rows = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if let Some(comment) = line.strip_prefix('#') {
                if version.is_none() {
                    version = comment
                        .split_once("version")
                        .and_then(|(_, v)| v.trim().parse::<u32>().ok());
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Table(format!("line {}: {what}", lineno + 1));
            let mut cols = line.splitn(3, '\t');
            let level = cols
                .next()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| bad("bad level"))?;
            let has_newforms = match cols.next() {
                Some("true") => true,
                Some("false") => false,
                _ => return Err(bad("has_newforms must be true or false")),
            };
            let provenance = cols.next().unwrap_or("").trim().to_string();
            if provenance.is_empty() {
                return Err(bad("missing provenance"));
            }
            if rows.insert(level, TableRow { has_newforms, provenance }).is_some() {
                return Err(bad("duplicate level"));
            }
        }
        let version = version.ok_or_else(|| Error::Table("missing version header".into()))?;
        if rows.keys().copied().ne(1..=rows.len() as u64) {
            return Err(Error::Table("levels must be 1..=max without gaps".into()));
        }
        Ok(Self { version, rows })
    }

    pub fn max_level(&self) -> u64 {
        self.rows.len() as u64
    }

    pub fn row(&self, level: u64) -> Option<&TableRow> {
        self.rows.get(&level)
    }

    pub fn has_newforms(&self, level: &BigInt) -> Result<bool> {
        if level.is_zero() || level.is_negative() {
            return Err(Error::NotPositive(level.to_string()));
        }
        let outside = || Error::OutsideTable { level: level.to_u64().unwrap_or(u64::MAX), max: self.max_level() };
        let l = level.to_u64().ok_or_else(outside)?;
        self.rows.get(&l).map(|r| r.has_newforms).ok_or_else(outside)
    }

    /// Levels without newforms.
    pub fn empty_levels(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().filter(|(_, r)| !r.has_newforms).map(|(&l, _)| l)
    }
}

/// Looks `level` up in the bundled table.
pub fn has_newforms(level: &BigInt) -> Result<bool> {
    NewformTable::bundled().has_newforms(level)
}

/// Convenience for the common "is this set closed under no-newform levels" check.
pub fn all_without_newforms<'a>(
    table: &NewformTable,
    levels: impl IntoIterator<Item = &'a BigInt>,
) -> Result<bool> {
    for l in levels {
        if table.has_newforms(l)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn rewrite_examples() {
        let l = rewrite_seventh(1, 0).unwrap();
        assert_eq!((l.r1, l.s1, l.r2, l.s2), (6, 0, 1, 0));
        assert_eq!(l.c, b(320));
        assert_eq!(l.level, b(5));
        let l = rewrite_seventh(3, 0).unwrap();
        assert_eq!((l.r1, l.s1, l.r2, l.s2), (0, 2, 1, 0));
        assert_eq!(l.c, b(5));
        let l = rewrite_seventh(1, 12).unwrap();
        assert_eq!((l.r2, l.s2), (0, 7));
        assert_eq!(l.c, b(64));
        assert!(rewrite_seventh(0, 0).is_err());
    }

    #[test]
    fn level_examples() {
        assert_eq!(bs_level(&b(5)).unwrap(), b(10));
        assert_eq!(bs_level(&b(320)).unwrap(), b(5));
        assert_eq!(bs_level(&b(1)).unwrap(), b(2));
        assert_eq!(bs_level(&b(8 * 5)).unwrap(), b(10));
        assert!(matches!(bs_level(&b(128)), Err(Error::LevelHypothesis { .. })));
        assert!(matches!(bs_level(&b(5i64.pow(7))), Err(Error::LevelHypothesis { .. })));
        assert!(bs_level(&b(0)).is_err());
    }

    #[test]
    fn level_sets() {
        assert_eq!(n7_level_set(1, 0).unwrap(), BTreeSet::from([b(5)]));
        assert_eq!(n7_level_set(2, 0).unwrap(), BTreeSet::from([b(5), b(10)]));
        let all: BTreeSet<_> = [1, 2, 5, 10].into_iter().map(b).collect();
        assert!(n7_level_set(7, 7).unwrap().is_subset(&all));
    }

    #[test]
    fn exact_reconstruction() {
        for alpha in 1..=25 {
            for k in 0..=25 {
                let l = rewrite_seventh(alpha, k).unwrap();
                assert_eq!(l.coefficient(), l.reconstructed());
                assert!(l.r1 < 7 && l.r2 < 7);
                assert_eq!(l.v2c, l.r1);
            }
        }
    }

    #[test]
    fn hypotheses_recorded() {
        let l = rewrite_seventh(1, 0).unwrap();
        let checked: Vec<_> = l
            .hypotheses
            .iter()
            .filter(|h| h.status == HypothesisStatus::Checked)
            .map(|h| h.statement.as_str())
            .collect();
        assert!(checked.contains(&"w₂ ≡ 1 (mod 4)"));
        assert!(checked.contains(&"v₂(C·y⁷) = 4α + 2 ≥ 6"));
    }

    #[test]
    fn table_lookups() {
        for l in [1, 2, 5, 10] {
            assert!(!has_newforms(&b(l)).unwrap());
        }
        assert!(has_newforms(&b(11)).unwrap());
        assert!(matches!(has_newforms(&b(101)), Err(Error::OutsideTable { .. })));
        assert!(has_newforms(&b(0)).is_err());
        let t = NewformTable::bundled();
        assert_eq!(t.version, 1);
        assert!(t.row(5).unwrap().provenance.contains("15.1.2"));
    }

    #[test]
    fn table_parse_errors() {
        assert!(NewformTable::parse("1\tfalse\tx\n").is_err());
        assert!(NewformTable::parse("# version 1\n1\tmaybe\tx\n").is_err());
        assert!(NewformTable::parse("# version 1\n1\tfalse\n").is_err());
        assert!(NewformTable::parse("# version 1\n1\tfalse\tx\n3\ttrue\ty\n").is_err());
        let t = NewformTable::parse("# version 2\n1\tfalse\tx\n2\tfalse\ty\n").unwrap();
        assert_eq!((t.version, t.max_level()), (2, 2));
    }
}
