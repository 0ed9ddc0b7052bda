//! `limit-lab`: verification, sampling, and convergence experiments for the
//! plane-tree / pattern-avoiding-permutation bijections.
//!
//! Subcommands: `verify`, `sample`, `limit`, `converge`. Every run is fully
//! determined by its flags and seed; JSON output is a manifest recording
//! both alongside the results. Exit codes: 0 all checks pass, 1 invariant
//! failure, 2 usage error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use patperm::experiment::{
    converge, limit_prefix_laws, sample_prefix_law, verify_bijections, ConvergeRow,
};
use patperm::law::{Bucket, PrefixLaw};
use patperm::{Error, Pattern};

#[derive(Parser)]
#[command(name = "limit-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustively verify the bijections against the brute-force oracle.
    Verify {
        /// Largest permutation length to verify (at most 9).
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical law of the first k values of a uniform avoider of length n.
    Sample {
        #[arg(long)]
        pattern: Pattern,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        bucket_cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical law of the first k limit values over size-biased trees.
    Limit {
        #[arg(long)]
        pattern: Pattern,
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        bucket_cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Total-variation distances between finite-n window laws and the limit.
    Converge {
        #[arg(long)]
        pattern: Pattern,
        /// Strictly increasing comma-separated values of n.
        #[arg(long)]
        n_list: String,
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        bucket_cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn is_usage_error(e: &CliError) -> bool {
    matches!(
        e,
        CliError::Lib(
            Error::WindowTooLong { .. } | Error::ExhaustionBound { .. } | Error::BadInput(_)
        )
    )
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Verify { n_max, format, out } => {
            let report = verify_bijections(n_max)?;
            let passed = report.passed();
            let text = match format {
                Format::Json => {
                    let mut flags = BTreeMap::new();
                    flags.insert("n-max".to_string(), n_max.to_string());
                    manifest_text(
                        "verify",
                        flags,
                        0,
                        serde_json::json!({
                            "passed": passed,
                            "checks": report.checks,
                        }),
                    )
                }
                Format::Csv => {
                    let mut s = String::from("result,sigma,n,check\n");
                    for c in &report.checks {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            if c.pass { "PASS" } else { "FAIL" },
                            c.sigma,
                            c.n,
                            c.check
                        ));
                    }
                    s
                }
            };
            write_output(out.as_deref(), &text)?;
            if !passed {
                for line in report.lines() {
                    eprintln!("{line}");
                }
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample {
            pattern,
            n,
            count,
            k,
            bucket_cap,
            seed,
            format,
            out,
        } => {
            let law = sample_prefix_law(pattern, n, count, k, bucket_cap, seed)?;
            let text = match format {
                Format::Json => {
                    let mut flags = BTreeMap::new();
                    flags.insert("pattern".into(), pattern.to_string());
                    flags.insert("n".into(), n.to_string());
                    flags.insert("count".into(), count.to_string());
                    flags.insert("k".into(), k.to_string());
                    flags.insert("bucket-cap".into(), bucket_cap.to_string());
                    manifest_text(
                        "sample",
                        flags,
                        seed,
                        serde_json::json!({ "law": law, "errors": 0 }),
                    )
                }
                Format::Csv => law_csv(&law),
            };
            write_output(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Limit {
            pattern,
            count,
            k,
            bucket_cap,
            seed,
            format,
            out,
        } => {
            let (laws, errors) = limit_prefix_laws(&[pattern], count, k, bucket_cap, seed)?;
            let law = &laws[0];
            let text = match format {
                Format::Json => {
                    let mut flags = BTreeMap::new();
                    flags.insert("pattern".into(), pattern.to_string());
                    flags.insert("count".into(), count.to_string());
                    flags.insert("k".into(), k.to_string());
                    flags.insert("bucket-cap".into(), bucket_cap.to_string());
                    manifest_text(
                        "limit",
                        flags,
                        seed,
                        serde_json::json!({ "law": law, "errors": errors }),
                    )
                }
                Format::Csv => law_csv(law),
            };
            write_output(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Converge {
            pattern,
            n_list,
            count,
            k,
            bucket_cap,
            seed,
            format,
            out,
        } => {
            let ns = parse_n_list(&n_list)?;
            let rows = converge(pattern, &ns, count, k, bucket_cap, seed)?;
            let text = match format {
                Format::Json => {
                    let mut flags = BTreeMap::new();
                    flags.insert("pattern".into(), pattern.to_string());
                    flags.insert("n-list".into(), n_list.clone());
                    flags.insert("count".into(), count.to_string());
                    flags.insert("k".into(), k.to_string());
                    flags.insert("bucket-cap".into(), bucket_cap.to_string());
                    manifest_text(
                        "converge",
                        flags,
                        seed,
                        serde_json::json!({ "rows": rows }),
                    )
                }
                Format::Csv => converge_csv(&rows),
            };
            write_output(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_n_list(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::BadInput(format!("bad n-list entry {s:?}")))
        })
        .collect()
}

fn manifest_text(
    command: &str,
    flags: BTreeMap<String, String>,
    seed: u64,
    results: serde_json::Value,
) -> String {
    let value = patperm::experiment::manifest(command, &flags, seed, results);
    let mut text = serde_json::to_string_pretty(&value).expect("manifest serializes");
    text.push('\n');
    text
}

fn bucket_str(b: &Bucket) -> String {
    match b {
        Bucket::Value(v) => v.to_string(),
        Bucket::Large => "LARGE".to_string(),
    }
}

fn law_csv(law: &PrefixLaw) -> String {
    let mut s = String::new();
    let header: Vec<String> = (1..=law.k()).map(|i| format!("x{i}")).collect();
    s.push_str(&header.join(","));
    s.push_str(",count\n");
    for (window, count) in law.counts() {
        let cells: Vec<String> = window.iter().map(bucket_str).collect();
        s.push_str(&cells.join(","));
        s.push_str(&format!(",{count}\n"));
    }
    s
}

fn converge_csv(rows: &[ConvergeRow]) -> String {
    let mut s = String::from("n,tv,tv_stderr,samples,errors\n");
    for row in rows {
        s.push_str(&format!(
            "{},{:.6},{:.6},{},{}\n",
            row.n, row.tv, row.tv_stderr, row.samples, row.errors
        ));
    }
    s
}

fn write_output(out: Option<&std::path::Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}
