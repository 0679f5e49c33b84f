use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ecparity::io::{self, Corpus, Sidecar, VerificationJob};
use ecparity::parity::{Mode, Strictness};
use ecparity::report::{self, AnalysisOptions};
use ecparity::{selftest, BaseField, Error, LocalCache};

/// Local invariants, mod-p congruences and parity checks for elliptic curve pairs.
#[derive(Parser, Debug)]
#[command(name = "ecparity", version)]
struct Cli {
    /// Curve corpus, CSV (`label,a1,a2,a3,a4,a6`) or JSON.
    #[arg(long, global = true, default_value = "data/corpus.csv")]
    corpus: PathBuf,
    /// Selmer, lambda and rank data; a missing default file means no data.
    #[arg(long, global = true, default_value = "data/sidecar.json")]
    sidecar: PathBuf,
    /// Largest prime used when comparing traces.
    #[arg(long, global = true, default_value_t = 10_000)]
    max_prime: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local table of one curve.
    Analyze {
        label: String,
        #[arg(long, default_value = "Q")]
        field: BaseField,
        #[arg(long)]
        p: u64,
    },
    /// Full parity report for a pair.
    Compare {
        label1: String,
        label2: String,
        #[arg(long, default_value = "Q")]
        field: BaseField,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "auto")]
        mode: Mode,
        /// Refuse to assume the mod-p conductor exponent at wild places.
        #[arg(long)]
        strict: bool,
    },
    /// Run every job in a file, one `label1 label2 field p [mode] [strictness]` per line.
    Batch { jobs: PathBuf },
    /// Exhaustive check of the local case tables.
    Selftest,
}

enum Outcome {
    Ok,
    Fails,
}

fn load_sidecar(path: &Path, explicit: bool) -> ecparity::Result<Sidecar> {
    if !explicit && !path.exists() {
        return Ok(Sidecar::default());
    }
    Sidecar::load(path)
}

fn emit(cli: &Cli, json: String) -> ecparity::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{json}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn run(cli: &Cli, sidecar_explicit: bool) -> ecparity::Result<Outcome> {
    let cache = LocalCache::from_env();
    let options = AnalysisOptions {
        congruence: ecparity::congruence::CongruenceConfig {
            max_prime: cli.max_prime,
        },
        ..AnalysisOptions::default()
    };
    let corpus = || -> ecparity::Result<Corpus> { io::parse_corpus(&cli.corpus) };
    let outcome = match &cli.command {
        Command::Analyze { label, field, p } => {
            let corpus = corpus()?;
            let r = report::analyze_curve(corpus.get(label)?, *field, *p, &cache)?;
            emit(cli, to_json(&r))?;
            Outcome::Ok
        }
        Command::Compare {
            label1,
            label2,
            field,
            p,
            mode,
            strict,
        } => {
            let corpus = corpus()?;
            let sidecar = load_sidecar(&cli.sidecar, sidecar_explicit)?;
            let mut job = VerificationJob::new(label1, label2, *field, *p)?;
            job.mode = *mode;
            if *strict {
                job.strictness = Strictness::Strict;
            }
            let r = report::run_job(&job, &corpus, &sidecar, options, &cache)?;
            emit(cli, r.to_json())?;
            if r.has_failure() {
                Outcome::Fails
            } else {
                Outcome::Ok
            }
        }
        Command::Batch { jobs } => {
            let corpus = corpus()?;
            let sidecar = load_sidecar(&cli.sidecar, sidecar_explicit)?;
            let text = std::fs::read_to_string(jobs)?;
            let jobs = io::parse_jobs(&text, &jobs.display().to_string())?;
            let r = report::run_batch(&jobs, &corpus, &sidecar, options, &cache);
            emit(cli, to_json(&r))?;
            if r.failures > 0 {
                Outcome::Fails
            } else {
                Outcome::Ok
            }
        }
        Command::Selftest => {
            let s = selftest::check_case_table()?;
            emit(cli, to_json(&s))?;
            if s.passed() {
                Outcome::Ok
            } else {
                Outcome::Fails
            }
        }
    };
    cache.save()?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let sidecar_explicit =
        std::env::args().any(|a| a == "--sidecar" || a.starts_with("--sidecar="));
    let cli = Cli::parse();
    match run(&cli, sidecar_explicit) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Io(_) | Error::Parse { .. } = e {
                eprintln!(
                    "(corpus {}, sidecar {})",
                    cli.corpus.display(),
                    cli.sidecar.display()
                );
            }
            ExitCode::from(2)
        }
    }
}
