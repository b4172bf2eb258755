use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use tldimer::export::intertwiner_exports;
use tldimer::{suites, tables, Report};
use tldimer_core::exact::Rational;

#[derive(Parser)]
#[command(
    name = "tldimer",
    version,
    about = "Exact checks for Temperley-Lieb modules, spin sectors and dimer transfer matrices"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Omit timing and version fields so identical runs print identical output.
    #[arg(long, global = true)]
    stable: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TLDIMER_MAX_THREADS")]
    max_threads: Option<usize>,
    /// Upper bound on n for theorem certificates.
    #[arg(long, global = true)]
    bound_n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of the spin sectors and standard modules for one n.
    Dims {
        #[arg(long)]
        n: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
        /// Twice the magnetisation of a single sector.
        #[arg(long, allow_hyphen_values = true)]
        two_v: Option<i64>,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        /// Write the intertwiner matrices to this file (intertwiners suite).
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Partition function of the dimer model on a cylinder.
    Partition {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        /// Evaluate at this weight, `p/q` or an integer.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Print the polynomial (the default without --alpha).
        #[arg(long)]
        poly: bool,
        /// Also count coverings by exhaustive search and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// List basis elements.
    Enumerate {
        #[command(subcommand)]
        what: Listing,
    },
}

#[derive(Subcommand)]
enum Listing {
    /// Link states of V_n^d, or W_n^d with --composite.
    Links {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        composite: bool,
    },
    /// Spin states of the sector E_{n-1}^v.
    Sector {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        two_v: i64,
    },
    /// Connectivities on n sites.
    Connectivities {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    TlRelations,
    Tau,
    Dimer,
    Intertwiners,
    Theorem,
    All,
}

enum Failure {
    Usage(String),
}

impl From<tldimer_core::Error> for Failure {
    fn from(e: tldimer_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let report = match &cli.command {
        Command::Dims { n } => tables::dims(*n)?,
        Command::Verify {
            suite,
            n,
            two_v,
            rows,
            cols,
            export,
        } => {
            if export.is_some() && !matches!(suite, Suite::Intertwiners) {
                return Err(Failure::Usage("--export applies to the intertwiners suite".into()));
            }
            match suite {
                Suite::TlRelations => suites::tl_relations(n.unwrap_or(6))?,
                Suite::Tau => suites::tau(n.unwrap_or(10))?,
                Suite::Dimer => suites::dimer(*rows, *cols)?,
                Suite::Intertwiners => {
                    let n = n.unwrap_or(8);
                    let report = suites::intertwiners(n, *two_v)?;
                    if let Some(path) = export {
                        let data = serde_json::to_string_pretty(&intertwiner_exports(n, *two_v)?)
                            .map_err(|e| Failure::Usage(e.to_string()))?;
                        std::fs::write(path, data)
                            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
                    }
                    report
                }
                Suite::Theorem => suites::theorem(n.unwrap_or(9), cli.bound_n)?,
                Suite::All => suites::all(n.unwrap_or(8), *rows, *cols, cli.bound_n)?,
            }
        }
        Command::Partition {
            rows,
            cols,
            alpha,
            poly,
            oracle,
        } => {
            let alpha = match alpha {
                Some(text) => Some(text.parse::<Rational>()?),
                None => None,
            };
            tables::partition(*rows, *cols, alpha, *poly, *oracle)?
        }
        Command::Enumerate { what } => match what {
            Listing::Links { n, d, composite } => tables::enumerate_links(*n, *d, *composite)?,
            Listing::Sector { n, two_v } => tables::enumerate_sector(*n, *two_v)?,
            Listing::Connectivities { n } => tables::enumerate_connectivities(*n)?,
        },
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.max_threads {
        if k == 0 {
            eprintln!("error: --max-threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let started = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r.finish(started),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let report = if cli.stable { report.stable() } else { report };
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    ExitCode::from(report.exit_code() as u8)
}
