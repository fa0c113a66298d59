//! `lamplab` — seeded experiments on lamplighter random walks.
//!
//! Every subcommand writes one table (CSV with a manifest comment
//! line, or JSON embedding the manifest). All randomness derives from
//! `--seed` through per-trial stream derivation, so reruns with an
//! equal manifest are byte-identical regardless of `--threads`.
//!
//! Exit codes: 0 success, 2 parameter or usage error, 1 internal
//! failure.

mod commands;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use lamplab_core::{Error, Result};
use report::Manifest;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "lamplab",
    version,
    about = "Seeded experiments on lamplighter random walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed from which every random stream is derived.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted. A relative path lands in
    /// $LAMPLAB_OUT_DIR when that variable is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker-thread override; never affects the numbers.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Escape-versus-gluing probabilities of the coupled pair over
    /// dyadic radii up to --radius, with the absorbing-chain value.
    Coupling {
        #[arg(long, default_value_t = 64)]
        radius: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Potential-kernel values on the centered square of side
    /// 2·radius + 1.
    Kernel {
        #[arg(long, default_value_t = 5)]
        radius: i64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// "standard" (zero at the origin) or "shifted" (one half).
        #[arg(long, default_value = "standard")]
        normalization: String,
    },
    /// Max harmonicity residual of the canonical harmonic function of
    /// the group over the radius ball.
    HarmonicCheck {
        #[arg(long, default_value = "C2 wr Z2")]
        group: String,
        #[arg(long, default_value_t = 30)]
        radius: i64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Growth profile: max |h| over balls of radius 1..=radius.
    GrowthProfile {
        #[arg(long, default_value = "C2 wr Z2")]
        group: String,
        #[arg(long, default_value_t = 60)]
        radius: u64,
    },
    /// Exact entropies of the walk after 0..=steps steps.
    EntropyExact {
        #[arg(long, default_value = "C2 wr Z")]
        group: String,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Fuzzed inequality suite plus the exact walk growth-bound audit
    /// up to --steps.
    AuditInequalities {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Visit counts of one seeded lazy walk on a lattice.
    VisitProfile {
        #[arg(long, default_value = "Z2")]
        group: String,
        #[arg(long, default_value_t = 1024)]
        steps: u64,
    },
    /// Conditional-entropy lower bounds over a doubling length grid.
    EntropyGrowth {
        #[arg(long, default_value = "C2 wr Z2")]
        group: String,
        /// Wreath depth: 1 measures the group itself, deeper values
        /// iterate lamps-over-grid recursively.
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, default_value_t = 4096)]
        n_max: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Lazy-power operator identities on the cycle.
    ExpansionCheck {
        #[arg(long, default_value_t = 64)]
        size: usize,
        /// Laziness; all of ¼, ½, ¾ when omitted.
        #[arg(long)]
        alpha: Option<f64>,
        /// Largest operator power.
        #[arg(long, default_value_t = 40)]
        steps: usize,
        /// Largest difference order.
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Binomial finite-difference bound over an exhaustive grid.
    BinomialBound {
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        m_max: usize,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Numeric(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

fn resolve_out(out: Option<PathBuf>) -> Option<PathBuf> {
    let out = out?;
    if out.is_relative() {
        if let Some(dir) = std::env::var_os("LAMPLAB_OUT_DIR") {
            return Some(PathBuf::from(dir).join(out));
        }
    }
    Some(out)
}

fn run(cli: &Cli) -> Result<()> {
    let (subcommand, params, report) = commands::execute(&cli.command, cli.seed)?;
    let out = resolve_out(cli.out.clone());
    let output = out
        .as_ref()
        .map_or_else(|| "stdout".to_string(), |p| p.display().to_string());
    let manifest = Manifest {
        subcommand,
        params,
        seed: cli.seed,
        output,
    };
    let text = report::render(&report, &manifest, cli.format == Format::Json);
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| {
                    Error::InvalidParameter(format!(
                        "cannot create output directory {}: {e}",
                        parent.display()
                    ))
                })?;
            }
            std::fs::write(&path, text).map_err(|e| {
                Error::InvalidParameter(format!(
                    "cannot write output file {}: {e}",
                    path.display()
                ))
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure the thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
