use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gfp_bench::{
    cmd_bench_fft, cmd_bench_mul, cmd_profile_mul, cmd_verify, configure_threads, parse_radix, write_csv, Backend,
    BenchConfig, CliError,
};

#[derive(Parser)]
#[command(name = "gfp-bench", version, about = "Generalized Fermat prime field arithmetic: verification and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every module against the oracles; prints one PASS/FAIL line per check.
    Verify(Opts),
    /// Time field multiplication: convolution vs big-integer vs plain oracle.
    BenchMul {
        #[command(flatten)]
        opts: Opts,
        /// Save each row's random inputs as GFPV files in this directory.
        #[arg(long)]
        save_vectors: Option<PathBuf>,
    },
    /// Time the six-step transform per backend.
    BenchFft {
        #[command(flatten)]
        opts: Opts,
        /// Run K in {16, 32, 64} x e in {2, 3} instead of a single size.
        #[arg(long)]
        grid: bool,
    },
    /// Per-stage time split of the convolution multiplier.
    ProfileMul(Opts),
}

#[derive(Args, Clone)]
struct Opts {
    /// Number of radix digits (power of two).
    #[arg(long)]
    k: Option<usize>,
    /// Radix: decimal, 0x hex, 2^a or 2^a+-2^b.
    #[arg(long, value_parser = parse_r)]
    r: Option<u64>,
    /// Base transform size.
    #[arg(long = "K")]
    big_k: Option<usize>,
    /// Transform length is K^e.
    #[arg(long, default_value_t = 2)]
    e: u32,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// gfp-fft, gfp-bigint or oracle-bigint; all when omitted.
    #[arg(long, value_parser = parse_backend)]
    backend: Option<Backend>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_r(s: &str) -> Result<u64, String> {
    parse_radix(s).map_err(|e| e.to_string())
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

impl From<Opts> for BenchConfig {
    fn from(o: Opts) -> Self {
        BenchConfig { backend: o.backend, k: o.k, r: o.r, big_k: o.big_k, e: o.e, trials: o.trials, seed: o.seed, out: o.out }
    }
}

fn run(cli: Cli) -> gfp_bench::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Verify(opts) => {
            let config = BenchConfig::from(opts);
            let report = cmd_verify(&config)?;
            match &config.out {
                Some(p) => std::fs::write(p, report.to_string())?,
                None => print!("{report}"),
            }
            if !report.passed() {
                return Err(CliError::VerifyFailed(report.failures()));
            }
        }
        Command::BenchMul { opts, save_vectors } => {
            let config = BenchConfig::from(opts);
            if let Some(dir) = &save_vectors {
                std::fs::create_dir_all(dir)?;
            }
            let rows = cmd_bench_mul(&config, save_vectors.as_deref())?;
            write_csv(&rows, config.out.as_deref())?;
        }
        Command::BenchFft { opts, grid } => {
            let config = BenchConfig::from(opts);
            write_csv(&cmd_bench_fft(&config, grid)?, config.out.as_deref())?;
        }
        Command::ProfileMul(opts) => {
            let config = BenchConfig::from(opts);
            write_csv(&cmd_profile_mul(&config)?, config.out.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
