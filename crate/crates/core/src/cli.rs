//! Command-line front end. Machine output goes to `out` as line-delimited
//! text; diagnostics go to `err`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or precondition
//! error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use crate::arith::power_shape;
use crate::certify::{certify_all, certify_branch, BranchId, CertificateSuite, SuiteBounds};
use crate::descent::{completeness_report, enumerate_primitive, oracle_enumerate};
use crate::error::Error;
use crate::newform::{n7_level_set, rewrite_seventh, NewformTable};
use crate::search::{theorem_search_with, SearchConfig, DEFAULT_N_VALUES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "quintic-descent", version, about = "Verify the descent for X^(2N) + 2^(2a) 5^(2b) p^(2c) = Z^5")]
struct Cli {
    /// Config file of `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Newform level table replacing the bundled one.
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Primitive solutions of x^2 + y^2 = z^5, one "x y z" per line.
    Enumerate {
        #[arg(long)]
        zmax: Option<BigInt>,
        /// Use the brute-force enumerator instead of the parametrization.
        #[arg(long)]
        oracle: bool,
    },
    /// Decompose a middle term as 2^(2a) 5^(2b) p^(2c).
    Shape { value: BigInt },
    /// Emit residue certificates.
    Certify {
        #[arg(long, conflicts_with = "all")]
        branch: Option<String>,
        #[arg(long)]
        all: bool,
        /// Bound for the LEMMA2_QUARTIC5 scan.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Level computations for the n = 7 case.
    Level(LevelArgs),
    /// Exhaustive search for solutions.
    Search {
        #[arg(long)]
        zmax: Option<u64>,
        /// Comma-separated exponents N.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u32>>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Z values per work unit.
        #[arg(long)]
        chunk: Option<u64>,
    },
    /// Compare the parametrization with the brute-force enumerator.
    OracleMatch {
        #[arg(long)]
        zmax: Option<BigInt>,
    },
}

#[derive(Debug, Args)]
struct LevelArgs {
    #[arg(long, requires = "k", conflicts_with = "set")]
    alpha: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    set: bool,
    #[arg(long = "alpha-max")]
    alpha_max: Option<u32>,
    #[arg(long = "k-max")]
    k_max: Option<u32>,
}

/// `key = value` settings; `#` starts a comment.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Config(BTreeMap<String, String>);

const CONFIG_KEYS: [&str; 10] =
    ["zmax", "n", "workers", "chunk", "checkpoint", "bound", "eq4_bound", "table", "alpha_max", "k_max"];

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
            let k = k.trim().replace('-', "_");
            if !CONFIG_KEYS.contains(&k.as_str()) {
                return Err(format!("config line {}: unknown key `{k}`", i + 1));
            }
            map.insert(k, v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        self.0
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| format!("config `{key}`: {e}")))
            .transpose()
    }

    fn get_list(&self, key: &str) -> Result<Option<Vec<u32>>, String> {
        self.0
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().parse::<u32>().map_err(|e| format!("config `{key}`: {e}")))
                    .collect()
            })
            .transpose()
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Flag, then config, then default.
fn pick<T>(flag: Option<T>, config: Result<Option<T>, String>, default: T) -> Result<T, Failure> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(config.map_err(Failure::Usage)?.unwrap_or(default)),
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli, &mut io) {
        Ok(()) => EXIT_OK,
        Err(Failure::Verify(msg)) => {
            let _ = writeln!(io.err, "verification failed: {msg}");
            EXIT_VERIFY
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli, io: &mut Io) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(p) => Config::load(p).map_err(Failure::Usage)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Enumerate { zmax, oracle } => {
            let zmax = pick(zmax, config.get("zmax"), BigInt::from(30))?;
            let sols = if oracle { oracle_enumerate(&zmax)? } else { enumerate_primitive(&zmax)? };
            for s in sols {
                writeln!(io.out, "{s}")?;
            }
        }
        Command::Shape { value } => match power_shape(&value)? {
            Some(s) => writeln!(io.out, "{}", serde_json::to_string(&s).unwrap())?,
            None => writeln!(io.out, "none")?,
        },
        Command::Certify { branch, all: _, bound } => {
            let eq4 = config.get::<u32>("eq4_bound").map_err(Failure::Usage)?.unwrap_or(3);
            let bounds = SuiteBounds {
                quartic5_bound: pick(bound, config.get("bound"), 200)?,
                eq4_max: (eq4, eq4, eq4),
            };
            let suite = match branch {
                Some(b) => {
                    let id: BranchId = b.parse()?;
                    CertificateSuite { certificates: vec![certify_branch(id, bounds)?], axioms: vec![] }
                }
                None => certify_all(bounds)?,
            };
            write!(io.out, "{}", suite.to_lines())?;
            let failed = suite.failures();
            if !failed.is_empty() {
                let names: Vec<_> = failed.iter().map(|b| b.as_str()).collect();
                return Err(Failure::Verify(format!("certificates {}", names.join(", "))));
            }
        }
        Command::Level(args) => level(args, &cli.table, &config, io)?,
        Command::Search { zmax, n, workers, checkpoint, chunk } => {
            let mut cfg = SearchConfig::new(
                pick(zmax, config.get("zmax"), 200)?,
                &pick(n, config.get_list("n"), DEFAULT_N_VALUES.to_vec())?,
            );
            cfg.workers = pick(workers, config.get("workers"), 1)?;
            cfg.chunk = pick(chunk, config.get("chunk"), 16)?;
            cfg.checkpoint = match checkpoint {
                Some(p) => Some(p),
                None => config.get("checkpoint").map_err(Failure::Usage)?,
            };
            let report = theorem_search_with(&cfg)?;
            for h in &report.hits {
                writeln!(io.out, "{}", serde_json::to_string(&json!({"kind": "hit", "hit": h})).unwrap())?;
            }
            let summary = json!({
                "kind": "summary",
                "z_max": report.z_max.to_string(),
                "n_values": report.n_values,
                "hits": report.hits.len(),
                "counterexamples": report.counterexamples.len(),
                "pairs_scanned": report.pairs_scanned,
            });
            writeln!(io.out, "{summary}")?;
            writeln!(
                io.err,
                "searched in {} ms with {} worker(s), {} chunk(s) resumed",
                report.elapsed_ms, cfg.workers, report.resumed_chunks
            )?;
            if !report.verify_all() {
                return Err(Failure::Verify("a hit failed exact readback".into()));
            }
            if !report.counterexamples.is_empty() {
                return Err(Failure::Verify(format!(
                    "{} counterexample(s) with N > 1",
                    report.counterexamples.len()
                )));
            }
        }
        Command::OracleMatch { zmax } => {
            let zmax = pick(zmax, config.get("zmax"), BigInt::from(30))?;
            let r = completeness_report(&zmax)?;
            let classes: Vec<_> =
                r.classes_by_z().into_iter().map(|(z, n)| json!([z.to_string(), n])).collect();
            let line = json!({
                "z_max": r.z_max,
                "parametrized": r.parametrized.len(),
                "oracle": r.oracle.len(),
                "non_primitive_excluded": r.non_primitive_excluded,
                "classes_by_z": classes,
                "missing_from_parametrization": r.missing_from_parametrization,
                "missing_from_oracle": r.missing_from_oracle,
                "complete": r.is_complete(),
            });
            writeln!(io.out, "{line}")?;
            if !r.is_complete() {
                let first = r
                    .missing_from_parametrization
                    .first()
                    .or(r.missing_from_oracle.first())
                    .map(|s| s.to_string())
                    .unwrap_or_default();
                return Err(Failure::Verify(format!("unmatched solution ({first})")));
            }
        }
    }
    Ok(())
}

fn level(args: LevelArgs, table: &Option<PathBuf>, config: &Config, io: &mut Io) -> Result<(), Failure> {
    let table_path = match table {
        Some(p) => Some(p.clone()),
        None => config.get::<PathBuf>("table").map_err(Failure::Usage)?,
    };
    let table = match table_path {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            NewformTable::parse(&text)?
        }
        None => NewformTable::bundled(),
    };
    if args.set {
        let alpha_max = pick(args.alpha_max, config.get("alpha_max"), 25)?;
        let k_max = pick(args.k_max, config.get("k_max"), 25)?;
        let levels = n7_level_set(alpha_max, k_max)?;
        let mut with_forms = Vec::new();
        for l in &levels {
            if table.has_newforms(l)? {
                with_forms.push(l.to_string());
            }
        }
        let line = json!({
            "alpha_max": alpha_max,
            "k_max": k_max,
            "levels": levels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "levels_with_newforms": with_forms,
            "table_version": table.version,
        });
        writeln!(io.out, "{line}")?;
        if !with_forms.is_empty() {
            return Err(Failure::Verify(format!("levels with newforms: {}", with_forms.join(", "))));
        }
        return Ok(());
    }
    let (Some(alpha), Some(k)) = (args.alpha, args.k) else {
        return Err(Failure::Usage("level needs --alpha and --k, or --set".into()));
    };
    let lc = rewrite_seventh(alpha, k)?;
    let has = table.has_newforms(&lc.level)?;
    writeln!(io.out, "{}", lc.to_line())?;
    writeln!(io.out, "{}", json!({"level": lc.level.to_string(), "has_newforms": has}))?;
    if has {
        return Err(Failure::Verify(format!("level {} has newforms", lc.level)));
    }
    Ok(())
}
