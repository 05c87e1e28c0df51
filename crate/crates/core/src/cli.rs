//! The `slicerank` command line.
//!
//! Every invocation writes exactly one JSON document to stdout; diagnostics
//! go to stderr. Exit codes: 0 success or valid, 1 invalid system, 2 input
//! error, 3 budget or size limit, 4 internal error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bound::{compute_n, enumerate_monomials, growth_sequence};
use crate::budget::Budget;
use crate::decompose::decompose;
use crate::error::Error;
use crate::field::PrimeModulus;
use crate::oracle::slice_rank_oracle;
use crate::search::{search_exhaustive, search_greedy};
use crate::sumfree::{verify, TripleSystem};
use crate::tensor::{check_triangular, matrix_rank, FpTensor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "slicerank", version, about = "Slice-rank bounds for tricolored ordered sum-free sets over F_p")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Greedy,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact N and 3N for F_p^n.
    Bound {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        /// Also count monomials by brute force and compare.
        #[arg(long)]
        oracle: bool,
        /// Emit N and N^(1/n) for n = 1..=GROWTH_MAX.
        #[arg(long)]
        growth_max: Option<usize>,
        /// Tuple budget for the brute-force count.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check a triple system against the ordering condition and 3N.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Search for large ordered sum-free sets.
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: SearchMode,
        /// Stop once a system of this size is found.
        #[arg(long)]
        m_cap: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// DFS node budget.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Slice decomposition of a system's indicator tensor.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        /// Include every slice's tables in the output.
        #[arg(long)]
        emit_slices: bool,
        /// Term budget for the polynomial expansion.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Brute-force slice rank and triangular certificate of a tensor.
    Slicerank {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        /// Allow function spaces up to 2^27 points (|A| = 3 over F_2).
        #[arg(long)]
        large: bool,
    },
    /// Rank of a matrix over F_p.
    Rank {
        #[arg(long)]
        matrix: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bound { .. } => "bound",
            Command::Verify { .. } => "verify",
            Command::Search { .. } => "search",
            Command::Decompose { .. } => "decompose",
            Command::Slicerank { .. } => "slicerank",
            Command::Rank { .. } => "rank",
        }
    }

    fn parameters(&self) -> Value {
        match self {
            Command::Bound {
                p,
                n,
                oracle,
                growth_max,
                budget,
            } => json!({"p": p, "n": n, "oracle": oracle, "growthMax": growth_max, "budget": budget}),
            Command::Verify { input } => json!({"input": input}),
            Command::Search {
                p,
                n,
                mode,
                m_cap,
                seed,
                budget,
            } => json!({"p": p, "n": n, "mode": mode, "mCap": m_cap, "seed": seed, "budget": budget}),
            Command::Decompose {
                input,
                emit_slices,
                budget,
            } => json!({"input": input, "emitSlices": emit_slices, "budget": budget}),
            Command::Slicerank {
                tensor,
                max_rank,
                large,
            } => json!({"tensor": tensor, "maxRank": max_rank, "large": large}),
            Command::Rank { matrix } => json!({"matrix": matrix}),
        }
    }
}

/// One JSON document per invocation.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
    pub elapsed_millis: u64,
    pub version: &'static str,
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: "input",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::BudgetExceeded { .. } => (EXIT_BUDGET, "budget"),
            Error::Unsupported(_) => (EXIT_BUDGET, "unsupported"),
            Error::Invariant(_) => (EXIT_INTERNAL, "internal"),
            _ => (EXIT_INPUT, "input"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

/// Successful payload and the exit code to use.
pub struct Outcome {
    pub result: Value,
    pub code: i32,
}

fn ok(result: Value) -> Result<Outcome, Failure> {
    Ok(Outcome {
        result,
        code: EXIT_OK,
    })
}

fn modulus(p: u64) -> Result<PrimeModulus, Failure> {
    PrimeModulus::new(p).map_err(Failure::from)
}

fn positive_n(n: usize) -> Result<usize, Failure> {
    if n == 0 {
        return Err(Failure::input("n must be at least 1"));
    }
    Ok(n)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("cannot parse {}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

#[derive(Deserialize)]
struct MatrixJson {
    p: PrimeModulus,
    rows: Vec<Vec<u32>>,
}

fn read_matrix(path: &Path) -> Result<FpTensor, Failure> {
    let raw: Value = read_json(path)?;
    if raw.get("rows").is_some() {
        let m: MatrixJson =
            serde_json::from_value(raw).map_err(|e| Failure::input(format!("bad matrix: {e}")))?;
        Ok(FpTensor::from_rows(m.p, &m.rows)?)
    } else {
        serde_json::from_value(raw).map_err(|e| Failure::input(format!("bad matrix: {e}")))
    }
}

/// Runs one command with the given base budget.
pub fn execute(command: &Command, base: Budget) -> Result<Outcome, Failure> {
    match command {
        Command::Bound {
            p,
            n,
            oracle,
            growth_max,
            budget,
        } => {
            let p = modulus(*p)?;
            let n = positive_n(*n)?;
            let report = compute_n(p, n)?;
            let mut result = to_value(&report);
            if *oracle {
                let budget = Budget {
                    enumeration: budget.unwrap_or(base.enumeration),
                    ..base
                };
                let count = enumerate_monomials(p, n, &budget)?;
                result["oracleCount"] = Value::String(count.to_string());
                result["oracleAgrees"] = Value::Bool(count == report.n_value);
            }
            if let Some(max) = growth_max {
                result["growth"] = to_value(&growth_sequence(p, *max)?);
                result["growthNote"] = Value::String("approxRoot is approximate".into());
            }
            ok(result)
        }
        Command::Verify { input } => {
            let system: TripleSystem = read_json(input)?;
            let report = verify(&system);
            Ok(Outcome {
                code: if report.valid { EXIT_OK } else { EXIT_INVALID },
                result: to_value(&report),
            })
        }
        Command::Search {
            p,
            n,
            mode,
            m_cap,
            seed,
            budget,
        } => {
            let p = modulus(*p)?;
            let n = positive_n(*n)?;
            let budget = Budget {
                nodes: budget.unwrap_or(base.nodes),
                ..base
            };
            let mut result = match mode {
                SearchMode::Exhaustive => to_value(&search_exhaustive(p, n, *m_cap, &budget)?),
                SearchMode::Greedy => {
                    let witness = search_greedy(p, n, *seed)?;
                    json!({
                        "m": witness.m(),
                        "witness": to_value(&witness),
                        "bound3N": compute_n(p, n)?.three_n.to_string(),
                    })
                }
            };
            let witness: TripleSystem = serde_json::from_value(result["witness"].clone())
                .map_err(|e| Failure {
                    code: EXIT_INTERNAL,
                    kind: "internal",
                    message: e.to_string(),
                })?;
            result["witnessValid"] = Value::Bool(verify(&witness).valid);
            ok(result)
        }
        Command::Decompose {
            input,
            emit_slices,
            budget,
        } => {
            let system: TripleSystem = read_json(input)?;
            let budget = Budget {
                terms: budget.unwrap_or(base.terms),
                ..base
            };
            let out = decompose(&system, &budget)?;
            let mut result = to_value(&out);
            result["m"] = json!(system.m());
            result["nonvanishingSlices"] = json!(out.nonvanishing_count());
            if *emit_slices {
                result["decomposition"] = to_value(&out.decomposition);
            }
            ok(result)
        }
        Command::Slicerank {
            tensor,
            max_rank,
            large,
        } => {
            let t: FpTensor = read_json(tensor)?;
            let cert = check_triangular(&t);
            let rank = if t.k() == 2 {
                json!(matrix_rank(&t)?)
            } else {
                let budget = if *large { base.with_large_oracle() } else { base };
                to_value(&slice_rank_oracle(&t, *max_rank, &budget)?)
            };
            ok(json!({
                "rank": rank,
                "triangular": cert.holds,
                "lowerBound": cert.lower_bound,
                "diagonalCount": cert.diagonal_count,
                "witness": cert.witness,
            }))
        }
        Command::Rank { matrix } => {
            let t = read_matrix(matrix)?;
            let cert = check_triangular(&t);
            ok(json!({
                "rank": matrix_rank(&t)?,
                "triangular": cert.holds,
                "lowerBound": cert.lower_bound,
                "diagonalCount": cert.diagonal_count,
                "witness": cert.witness,
            }))
        }
    }
}

/// Parses `args`, runs the command, and returns the JSON document and exit
/// code. `--help` and `--version` are returned as plain text with code 0.
pub fn run<I, T>(args: I, base: Budget) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let start = Instant::now();
    let version = env!("CARGO_PKG_VERSION");
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (e.to_string(), EXIT_OK);
            }
            let report = RunReport {
                command: String::new(),
                parameters: Value::Null,
                result: None,
                error: Some(json!({"kind": "usage", "message": e.to_string()})),
                elapsed_millis: start.elapsed().as_millis() as u64,
                version,
            };
            return (render(&report), EXIT_INPUT);
        }
    };

    if let Some(threads) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let (result, error, code) = match execute(&cli.command, base) {
        Ok(out) => (Some(out.result), None, out.code),
        Err(f) => (
            None,
            Some(json!({"kind": f.kind, "message": f.message})),
            f.code,
        ),
    };
    let report = RunReport {
        command: cli.command.name().to_string(),
        parameters: cli.command.parameters(),
        result,
        error,
        elapsed_millis: start.elapsed().as_millis() as u64,
        version,
    };
    (render(&report), code)
}

fn render(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Value, i32) {
        let mut full = vec!["slicerank"];
        full.extend_from_slice(args);
        let (out, code) = run(full, Budget::default());
        (serde_json::from_str(&out).unwrap(), code)
    }

    #[test]
    fn bound_with_oracle() {
        let (v, code) = run_args(&["bound", "--p", "3", "--n", "3", "--oracle"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["N"], "10");
        assert_eq!(v["result"]["oracleAgrees"], true);
        assert_eq!(v["command"], "bound");
    }

    #[test]
    fn non_prime_is_input_error() {
        let (v, code) = run_args(&["bound", "--p", "4", "--n", "2"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(v["error"]["message"].as_str().unwrap().contains("not a prime"));
    }

    #[test]
    fn oracle_budget_is_exit_3() {
        let (v, code) = run_args(&["bound", "--p", "5", "--n", "20", "--oracle", "--budget", "1000"]);
        assert_eq!(code, EXIT_BUDGET);
        assert_eq!(v["error"]["kind"], "budget");
    }

    #[test]
    fn usage_errors_are_json() {
        let (v, code) = run_args(&["bound", "--p", "3"]);
        assert_eq!(code, EXIT_INPUT);
        assert_eq!(v["error"]["kind"], "usage");
    }
}
