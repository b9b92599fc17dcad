//! Exhaustive search for `X^(2N) + 2^(2α) 5^(2β) p^(2γ) = Z^5` with
//! `gcd(X, Z) = 1`.
//!
//! For each `Z`, `N` and `X` with `X^(2N) < Z^5` the difference
//! `D = Z^5 - X^(2N)` is tested with [`power_shape`]. Every hit with `N > 1`
//! is a counterexample to the nonexistence result and is reported, not
//! thrown.
//!
//! The `Z` range is cut into fixed chunks that workers claim from a shared
//! counter; results are merged and sorted by `(N, Z, X)`, so the report does
//! not depend on the worker count. Completed chunks can be appended to a
//! checkpoint file and skipped on a later run.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, power_shape, PowerShape};
use crate::error::{Error, Result};

/// Exponents searched when none are given: the primes up to 13. Every `N > 1`
/// has a prime divisor, and a solution for `N` gives one for each divisor.
pub const DEFAULT_N_VALUES: [u32; 6] = [2, 3, 5, 7, 11, 13];

/// One solution `X^(2N) + shape = Z^5`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub n: u32,
    #[serde(with = "crate::serde_str")]
    pub x: BigInt,
    #[serde(with = "crate::serde_str")]
    pub z: BigInt,
    pub shape: PowerShape,
}

impl Hit {
    /// Re-checks the equation and coprimality from scratch.
    pub fn verify(&self) -> bool {
        let lhs = self.x.pow(2 * self.n) + self.shape.value();
        lhs == self.z.pow(5) && gcd(&self.x, &self.z).map(|g| g.is_one()).unwrap_or(false)
    }

    fn key(&self) -> (u32, BigInt, BigInt) {
        (self.n, self.z.clone(), self.x.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub z_max: BigInt,
    pub n_values: Vec<u32>,
    /// Sorted by `(N, Z, X)`.
    pub hits: Vec<Hit>,
    pub counterexamples: Vec<Hit>,
    pub elapsed_ms: u64,
    pub pairs_scanned: u64,
    /// Chunks restored from a checkpoint instead of recomputed.
    pub resumed_chunks: usize,
}

impl SearchReport {
    pub fn verify_all(&self) -> bool {
        self.hits.iter().all(Hit::verify)
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub z_max: u64,
    pub n_values: Vec<u32>,
    pub workers: usize,
    /// Number of consecutive `Z` values per work unit.
    pub chunk: u64,
    pub checkpoint: Option<PathBuf>,
}

impl SearchConfig {
    pub fn new(z_max: u64, n_values: &[u32]) -> Self {
        Self { z_max, n_values: n_values.to_vec(), workers: 1, chunk: 16, checkpoint: None }
    }

    fn validate(&self) -> Result<()> {
        if self.z_max < 2 {
            return Err(Error::Precondition(format!("z_max = {} must be at least 2", self.z_max)));
        }
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return Err(Error::Precondition("n values must be non-empty and at least 1".into()));
        }
        if self.workers == 0 || self.chunk == 0 {
            return Err(Error::Precondition("workers and chunk must be at least 1".into()));
        }
        // Z^5 must fit the u128 prefilter
        if self.z_max >= 1 << 25 {
            return Err(Error::Precondition(format!("z_max = {} is beyond desk scale", self.z_max)));
        }
        Ok(())
    }

    fn chunks(&self) -> Vec<(u64, u64)> {
        (2..=self.z_max)
            .step_by(self.chunk as usize)
            .map(|lo| (lo, (lo + self.chunk - 1).min(self.z_max)))
            .collect()
    }
}

/// Single-threaded search over `2 <= Z <= z_max` and each `N` in `n_values`.
pub fn theorem_search(z_max: &BigInt, n_values: &[u32]) -> Result<SearchReport> {
    let z = z_max
        .to_u64()
        .ok_or_else(|| Error::Precondition(format!("z_max = {z_max} must be in 2..2^25")))?;
    theorem_search_with(&SearchConfig::new(z, n_values))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct ChunkResult {
    z_lo: u64,
    z_hi: u64,
    pairs_scanned: u64,
    hits: Vec<Hit>,
}

/// Scans `z_lo..=z_hi`.
fn scan_chunk(z_lo: u64, z_hi: u64, n_values: &[u32]) -> ChunkResult {
    let mut out = ChunkResult { z_lo, z_hi, ..Default::default() };
    for z in z_lo..=z_hi {
        let z5 = (z as u128).pow(5);
        for &n in n_values {
            let mut x = 1u64;
            while let Some(xp) = (x as u128).checked_pow(2 * n) {
                if xp >= z5 {
                    break;
                }
                out.pairs_scanned += 1;
                let d = z5 - xp;
                // α >= 1 and all exponents even: D is a square divisible by 4
                if d.is_multiple_of(4) && num_integer::gcd(x, z) == 1 {
                    let r = d.sqrt();
                    if r * r == d {
                        let big = BigInt::from(d);
                        if let Ok(Some(shape)) = power_shape(&big) {
                            out.hits.push(Hit { n, x: x.into(), z: z.into(), shape });
                        }
                    }
                }
                x += 1;
            }
        }
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CheckpointLine {
    Header { z_max: u64, n_values: Vec<u32>, chunk: u64 },
    Chunk(ChunkResult),
}

/// Completed chunks in an existing checkpoint, keyed by `z_lo`.
fn load_checkpoint(cfg: &SearchConfig, path: &PathBuf) -> Result<BTreeMap<u64, ChunkResult>> {
    let mut done = BTreeMap::new();
    let Ok(file) = File::open(path) else {
        return Ok(done);
    };
    let bad = |e: String| Error::Checkpoint(format!("{}: {e}", path.display()));
    let mut header_seen = false;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| bad(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn final line from an interrupted run is dropped
        let Ok(rec) = serde_json::from_str::<CheckpointLine>(&line) else { continue };
        match rec {
            CheckpointLine::Header { z_max, n_values, chunk } => {
                if z_max != cfg.z_max || n_values != cfg.n_values || chunk != cfg.chunk {
                    return Err(bad("written for different search parameters".into()));
                }
                header_seen = true;
            }
            CheckpointLine::Chunk(c) => {
                if !header_seen {
                    return Err(bad("chunk before header".into()));
                }
                done.insert(c.z_lo, c);
            }
        }
    }
    Ok(done)
}

/// Search with the given worker count and optional checkpoint file.
pub fn theorem_search_with(cfg: &SearchConfig) -> Result<SearchReport> {
    cfg.validate()?;
    let start = Instant::now();
    let chunks = cfg.chunks();
    let mut done = match &cfg.checkpoint {
        Some(p) => load_checkpoint(cfg, p)?,
        None => BTreeMap::new(),
    };
    done.retain(|lo, c| chunks.contains(&(*lo, c.z_hi)));
    let resumed_chunks = done.len();
    let todo: Vec<(u64, u64)> = chunks.into_iter().filter(|(lo, _)| !done.contains_key(lo)).collect();

    let sink = match &cfg.checkpoint {
        Some(p) => {
            let fresh = !p.exists() || std::fs::metadata(p).map(|m| m.len() == 0).unwrap_or(true);
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|e| Error::Checkpoint(format!("{}: {e}", p.display())))?;
            if fresh {
                let header = CheckpointLine::Header {
                    z_max: cfg.z_max,
                    n_values: cfg.n_values.clone(),
                    chunk: cfg.chunk,
                };
                writeln!(f, "{}", serde_json::to_string(&header).unwrap())
                    .map_err(|e| Error::Checkpoint(e.to_string()))?;
            }
            Some(Mutex::new(f))
        }
        None => None,
    };

    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    let write_error = Mutex::new(None);
    std::thread::scope(|s| {
        for _ in 0..cfg.workers.min(todo.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(lo, hi)) = todo.get(i) else { break };
                let r = scan_chunk(lo, hi, &cfg.n_values);
                if let Some(f) = &sink {
                    let line = serde_json::to_string(&CheckpointLine::Chunk(r.clone())).unwrap();
                    let mut f = f.lock().unwrap();
                    if let Err(e) = writeln!(f, "{line}").and_then(|_| f.flush()) {
                        write_error.lock().unwrap().get_or_insert(e.to_string());
                    }
                }
                results.lock().unwrap().push(r);
            });
        }
    });
    if let Some(e) = write_error.into_inner().unwrap() {
        return Err(Error::Checkpoint(e));
    }

    let mut all: Vec<ChunkResult> = results.into_inner().unwrap();
    all.extend(done.into_values());
    let pairs_scanned = all.iter().map(|c| c.pairs_scanned).sum();
    let mut hits: Vec<Hit> = all.into_iter().flat_map(|c| c.hits).collect();
    hits.sort_by_key(Hit::key);
    let counterexamples = hits.iter().filter(|h| h.n > 1).cloned().collect();
    Ok(SearchReport {
        z_max: BigInt::from(cfg.z_max),
        n_values: cfg.n_values.clone(),
        hits,
        counterexamples,
        elapsed_ms: start.elapsed().as_millis() as u64,
        pairs_scanned,
        resumed_chunks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_the_n1_example() {
        let r = theorem_search(&BigInt::from(5), &[1]).unwrap();
        let example = Hit {
            n: 1,
            x: 41.into(),
            z: 5.into(),
            shape: PowerShape { alpha: 1, beta: 0, gamma: 1, p: Some(19.into()) },
        };
        assert_eq!(r.hits.iter().filter(|h| **h == example).count(), 1);
        assert!(r.counterexamples.is_empty());
        assert!(r.verify_all());
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(theorem_search(&BigInt::from(1), &[2]).is_err());
        assert!(theorem_search(&BigInt::from(10), &[]).is_err());
        assert!(theorem_search(&BigInt::from(10), &[0]).is_err());
    }

    #[test]
    fn chunking_covers_range() {
        let mut cfg = SearchConfig::new(40, &[2]);
        cfg.chunk = 7;
        let c = cfg.chunks();
        assert_eq!(c.first(), Some(&(2, 8)));
        assert_eq!(c.last(), Some(&(37, 40)));
        let covered: u64 = c.iter().map(|(lo, hi)| hi - lo + 1).sum();
        assert_eq!(covered, 39);
    }

    #[test]
    fn pairs_scanned_counts_candidates() {
        // Z = 2: X^4 < 32 for X = 1, 2
        let r = theorem_search(&BigInt::from(2), &[2]).unwrap();
        assert_eq!(r.pairs_scanned, 2);
    }
}
