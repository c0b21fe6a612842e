//! Command-line interface: drives the learners, the tester and the
//! verification suites, reporting results as JSON on stdout.

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::learn::{
    approx_learn_ck, approx_query_budget, learn_ck, query_budget, realize_unitary, LearnReport,
};
use crate::metric::{pauli_twirl, verify_conjugation_bounds};
use crate::oracle::{OracleHandle, OracleSpec, QueryLedger};
use crate::tableau::{clifford_group_size, query_lower_bound, random_clifford};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "clifford-learn",
    about = "Learn and test structured unitaries from Bell-sampling oracles",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OracleArg {
    /// Oracle description: inline JSON (starting with '{') or a path to a
    /// JSON file. See `OracleSpec` for the schema.
    #[arg(long)]
    oracle: String,
    /// Master seed for all randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OracleArg {
    fn build(&self) -> Result<(OracleHandle, ChaCha8Rng)> {
        let text = if self.oracle.trim_start().starts_with('{') {
            self.oracle.clone()
        } else {
            std::fs::read_to_string(&self.oracle).map_err(|e| Error::Config {
                path: self.oracle.clone(),
                msg: e.to_string(),
            })?
        };
        let spec: OracleSpec = serde_json::from_str(&text).map_err(|e| Error::Config {
            path: self.oracle.clone(),
            msg: e.to_string(),
        })?;
        Ok((spec.build()?, ChaCha8Rng::seed_from_u64(self.seed)))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Identify a Pauli oracle from a single Bell round.
    LearnPauli(OracleArg),
    /// Learn a Clifford oracle exactly (2n+1 forward, 2n conjugate queries).
    LearnClifford(OracleArg),
    /// Learn a level-k hierarchy oracle exactly.
    LearnCk {
        #[command(flatten)]
        oracle: OracleArg,
        /// Hierarchy level (1 = Pauli, 2 = Clifford, ...).
        #[arg(long)]
        k: usize,
    },
    /// Approximately learn an oracle close to a level-k element.
    LearnApprox {
        #[command(flatten)]
        oracle: OracleArg,
        #[arg(long)]
        k: usize,
        /// Promised distance bound.
        #[arg(long)]
        eps: f64,
        /// Failure probability.
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Run the CLOSE/FAR Clifford tester. Exits 0 on accept, 2 on reject.
    TestClifford {
        #[command(flatten)]
        oracle: OracleArg,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Print closed-form query budgets and group-size facts.
    Budget {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Also include the approximate-learning budget for this accuracy.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Check the metric and conjugation-bound suites on random instances.
    Verify {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time exact Clifford learning across qubit counts.
    Bench {
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Runs the CLI; the return value is the process exit code.
pub fn run() -> Result<i32> {
    run_with(Cli::parse())
}

fn run_with(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::LearnPauli(arg) => {
            let (mut oracle, mut rng) = arg.build()?;
            let n = oracle.num_qubits();
            let learned = crate::learn::learn_pauli(&mut oracle, &mut rng)?;
            print_json(&LearnReport {
                n,
                k: 1,
                learned: crate::learn::ConjugationTable::Pauli { pauli: learned },
                ledger: oracle.ledger(),
                expected_ledger: Some(query_budget(n, 1)?),
            })?;
            Ok(0)
        }
        Command::LearnClifford(arg) => {
            let (mut oracle, mut rng) = arg.build()?;
            let n = oracle.num_qubits();
            let learned = crate::learn::learn_clifford(&mut oracle, &mut rng)?;
            print_json(&LearnReport {
                n,
                k: 2,
                learned: crate::learn::ConjugationTable::Clifford { tableau: learned },
                ledger: oracle.ledger(),
                expected_ledger: Some(query_budget(n, 2)?),
            })?;
            Ok(0)
        }
        Command::LearnCk { oracle, k } => {
            let (mut handle, mut rng) = oracle.build()?;
            let n = handle.num_qubits();
            let learned = learn_ck(&mut handle, k, &mut rng)?;
            print_json(&LearnReport {
                n,
                k,
                learned,
                ledger: handle.ledger(),
                expected_ledger: Some(query_budget(n, k)?),
            })?;
            Ok(0)
        }
        Command::LearnApprox { oracle, k, eps, delta } => {
            let (mut handle, mut rng) = oracle.build()?;
            let n = handle.num_qubits();
            let out = approx_learn_ck(&mut handle, k, eps, delta, &mut rng)?;
            #[derive(Serialize)]
            struct ApproxReport {
                n: usize,
                k: usize,
                eps: f64,
                delta: f64,
                rounds_per_vote: u64,
                ties: usize,
                learned: crate::learn::ConjugationTable,
                ledger: QueryLedger,
                expected_ledger: QueryLedger,
            }
            print_json(&ApproxReport {
                n,
                k,
                eps,
                delta,
                rounds_per_vote: out.rounds_per_vote,
                ties: out.ties,
                learned: out.table,
                ledger: handle.ledger(),
                expected_ledger: approx_query_budget(n, k, eps, delta)?,
            })?;
            Ok(0)
        }
        Command::TestClifford { oracle, eps, delta } => {
            let (mut handle, mut rng) = oracle.build()?;
            let verdict = crate::cltest::clifford_test(&mut handle, eps, delta, &mut rng)?;
            let accept = verdict.accept;
            print_json(&verdict)?;
            Ok(if accept { 0 } else { 2 })
        }
        Command::Budget { n, k, eps, delta } => {
            #[derive(Serialize)]
            struct BudgetReport {
                n: usize,
                k: usize,
                exact: QueryLedger,
                approx: Option<QueryLedger>,
                clifford_group_size: String,
                information_lower_bound: u64,
            }
            print_json(&BudgetReport {
                n,
                k,
                exact: query_budget(n, k)?,
                approx: eps.map(|e| approx_query_budget(n, k, e, delta)).transpose()?,
                clifford_group_size: clifford_group_size(n).to_string(),
                information_lower_bound: query_lower_bound(n),
            })?;
            Ok(0)
        }
        Command::Verify { n, pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst_identity_residual = 0.0f64;
            let mut worst_twirl = 0.0f64;
            let mut violations = 0usize;
            for _ in 0..pairs {
                let a = crate::oracle::random_unitary(n, &mut rng);
                let b = crate::oracle::random_unitary(n, &mut rng);
                let report = verify_conjugation_bounds(&a, &b)?;
                if !report.is_satisfied(1e-9) {
                    violations += 1;
                }
                worst_identity_residual =
                    worst_identity_residual.max(report.average_identity_residual);
                let tw = pauli_twirl(n, a.matrix())?;
                let d = 1usize << n;
                let expect = crate::densesim::Matrix::identity(d)
                    .scale(a.matrix().trace() / d as f64);
                worst_twirl = worst_twirl.max(tw.max_abs_diff(&expect));
            }
            #[derive(Serialize)]
            struct VerifyReport {
                n: usize,
                pairs: usize,
                violations: usize,
                worst_identity_residual: f64,
                worst_twirl_residual: f64,
            }
            print_json(&VerifyReport {
                n,
                pairs,
                violations,
                worst_identity_residual,
                worst_twirl_residual: worst_twirl,
            })?;
            Ok(if violations == 0 { 0 } else { 2 })
        }
        Command::Bench { n_max, seed } => {
            #[derive(Serialize)]
            struct BenchRow {
                n: usize,
                micros: u128,
                ledger: QueryLedger,
            }
            let mut rows = Vec::new();
            let mut n = 1;
            while n <= n_max {
                let t = random_clifford(n, seed.wrapping_add(n as u64));
                let mut oracle = OracleHandle::from_tableau(t.clone());
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
                let start = std::time::Instant::now();
                let learned = crate::learn::learn_clifford(&mut oracle, &mut rng)?;
                let micros = start.elapsed().as_micros();
                if learned != t {
                    return Err(Error::NumericalInconsistency(format!(
                        "benchmark learning failed at n = {n}"
                    )));
                }
                rows.push(BenchRow { n, micros, ledger: oracle.ledger() });
                n *= 2;
            }
            print_json(&rows)?;
            Ok(0)
        }
    }
}

/// Realises a learned table when the instance is small enough; used by
/// integration tests exercising the CLI surface.
pub fn realize_if_small(table: &crate::learn::ConjugationTable) -> Option<crate::densesim::DenseUnitary> {
    if table.num_qubits() <= crate::DEFAULT_DENSE_LIMIT {
        realize_unitary(table).ok()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses_learn_clifford() {
        let cli = Cli::try_parse_from([
            "clifford-learn",
            "learn-clifford",
            "--oracle",
            r#"{"kind": "random_clifford", "n": 2, "seed": 5}"#,
            "--seed",
            "7",
        ])
        .unwrap();
        assert_eq!(run_with(cli).unwrap(), 0);
    }

    #[test]
    fn cli_budget_reports_group_size() {
        let cli = Cli::try_parse_from(["clifford-learn", "budget", "--n", "2", "--k", "3"]).unwrap();
        assert_eq!(run_with(cli).unwrap(), 0);
    }

    #[test]
    fn cli_test_clifford_accepts_clifford() {
        let cli = Cli::try_parse_from([
            "clifford-learn",
            "test-clifford",
            "--oracle",
            r#"{"kind": "random_clifford", "n": 1, "seed": 9}"#,
            "--eps",
            "0.5",
        ])
        .unwrap();
        assert_eq!(run_with(cli).unwrap(), 0);
    }

    #[test]
    fn cli_learn_ck_t_gate() {
        let cli = Cli::try_parse_from([
            "clifford-learn",
            "learn-ck",
            "--oracle",
            r#"{"kind": "gates", "gates": ["T"]}"#,
            "--k",
            "3",
        ])
        .unwrap();
        assert_eq!(run_with(cli).unwrap(), 0);
    }

    #[test]
    fn cli_verify_passes() {
        let cli =
            Cli::try_parse_from(["clifford-learn", "verify", "--n", "1", "--pairs", "10"]).unwrap();
        assert_eq!(run_with(cli).unwrap(), 0);
    }
}
