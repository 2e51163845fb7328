use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use zgaps::euler_arg::EulerArgConfig;
use zgaps::lfunc::LFamily;
use zgaps_cli::config::{parse_ladder, sibling};
use zgaps_cli::error::CliError;
use zgaps_cli::report;
use zgaps_cli::sweep::{run_sweep, Outcome};
use zgaps_cli::{Format, Precision, Route, SweepConfig};

#[derive(Parser)]
#[command(name = "zgaps", version, about = "Normalized gaps between zeta zeros and the argument inequality chain")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// zeta | dirichlet:<q>:<index> | cusp:<k>
    #[arg(long, default_value = "zeta")]
    family: String,
    /// first gap index
    #[arg(long)]
    from_n: u64,
    /// last zero index (gaps run to to_n − 1)
    #[arg(long)]
    to_n: u64,
    /// scan | trans | both
    #[arg(long, default_value = "scan")]
    route: String,
    #[arg(long, default_value = "1e-3,1e-4,1e-5,1e-6")]
    delta_ladder: String,
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    #[arg(long, default_value_t = 1024)]
    checkpoint_every: u64,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    /// double | extended
    #[arg(long, default_value = "double")]
    precision: String,
    /// stop after the first checkpoint at or past this many records
    #[arg(long, hide = true)]
    halt_after: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gap records for a range of zeta zeros, with summary and checkpoints.
    Sweep {
        #[command(flatten)]
        s: SweepArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plot data for figure 1 (g') or 2 (g), from a sweep CSV or a fresh sweep.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// existing sweep CSV; without it the sweep is run first
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        from_n: Option<u64>,
        #[arg(long)]
        to_n: Option<u64>,
        #[arg(long, default_value = "trans")]
        route: String,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-checks the rows of a sweep CSV and reports violations.
    Verify {
        input: PathBuf,
        #[arg(long)]
        from_n: Option<u64>,
        #[arg(long)]
        to_n: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalized gaps for an L-family, scanned or ingested.
    Lgaps {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0.0)]
        from_t: f64,
        #[arg(long, default_value_t = 100.0)]
        to_t: f64,
        #[arg(long)]
        ingest: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Euler-product argument at given ordinates.
    EulerArg {
        #[arg(long = "t", required = true)]
        t: Vec<f64>,
        #[arg(long, default_value = "zeta")]
        family: String,
        #[arg(long, default_value_t = 1e-6)]
        delta: f64,
        /// gonek or a fixed prime count
        #[arg(long, default_value = "gonek")]
        cutoff: String,
        #[arg(long, default_value_t = zgaps::euler_arg::DEFAULT_MAX_PRIMES)]
        max_primes: usize,
        #[arg(long)]
        prime_cache: Option<PathBuf>,
    },
    /// Builds or extends the prime cache.
    Primes {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        prime_cache: PathBuf,
    },
}

fn family(s: &str) -> Result<LFamily, CliError> {
    Ok(s.parse::<LFamily>()?)
}

fn sweep_config(s: &SweepArgs, out: PathBuf) -> Result<SweepConfig, CliError> {
    Ok(SweepConfig {
        family: family(&s.family)?,
        n_lo: s.from_n,
        n_hi: s.to_n,
        route: s.route.parse::<Route>()?,
        ladder: parse_ladder(&s.delta_ladder)?,
        parallelism: s.parallelism,
        checkpoint_every: s.checkpoint_every,
        out,
        format: s.format.parse::<Format>()?,
        precision: s.precision.parse::<Precision>()?,
    })
}

fn emit(v: &Value, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v)?;
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(format!("{}: {e}", p.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            // a closed pipe (`| head`) is not an error
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Sweep { s, out } => {
            let cfg = sweep_config(&s, out)?;
            match run_sweep(&cfg, s.halt_after)? {
                Outcome::Complete { .. } => {
                    eprintln!("wrote {} and {}", cfg.out.display(), cfg.summary_path().display());
                }
                Outcome::Halted { last_index } => eprintln!("halted after n = {last_index}"),
            }
            Ok(())
        }
        Cmd::Figure { which, input, from_n, to_n, route, parallelism, out } => {
            let csv = match input {
                Some(p) => p,
                None => {
                    let (Some(a), Some(b)) = (from_n, to_n) else {
                        return Err(CliError::config("figure needs --input or --from-n and --to-n"));
                    };
                    let mut cfg = SweepConfig::new(a, b, route.parse()?, sibling(&out, "sweep.csv"));
                    cfg.parallelism = parallelism;
                    run_sweep(&cfg, None)?;
                    cfg.out
                }
            };
            emit(&report::figure(&csv, which, &out)?, None)
        }
        Cmd::Verify { input, from_n, to_n, out } => emit(&report::verify(&input, from_n, to_n)?, out.as_ref()),
        Cmd::Lgaps { family: f, from_t, to_t, ingest, parallelism, out } => {
            let fam = family(&f)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(parallelism.max(1))
                .build()
                .map_err(|e| CliError::config(e.to_string()))?;
            let rep = pool.install(|| report::lgaps(fam, from_t, to_t, ingest.as_deref()))?;
            std::fs::write(&out, rep.csv()).map_err(|e| CliError::io(format!("{}: {e}", out.display())))?;
            let summary = rep.to_json();
            emit(&summary, Some(&sibling(&out, "summary.json")))?;
            emit(&summary, None)
        }
        Cmd::EulerArg { t, family: f, delta, cutoff, max_primes, prime_cache } => {
            let cfg = EulerArgConfig { cutoff_rule: report::parse_cutoff(&cutoff)?, delta, max_primes, ..Default::default() };
            let rows = report::euler_points(&t, family(&f)?, &cfg, prime_cache.as_deref())?;
            emit(&Value::Array(rows), None)
        }
        Cmd::Primes { count, prime_cache } => emit(&report::primes(&prime_cache, count)?, None),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zgaps: {e}");
            ExitCode::from(e.category.exit_code() as u8)
        }
    }
}
