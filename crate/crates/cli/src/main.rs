mod artifact;
mod commands;
mod markdown;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use artifact::{Certificate, Store};

/// Exact certificates for the thin-subgroup pipeline of the figure-eight
/// knot group in SL(4).
#[derive(Parser, Debug)]
#[command(name = "thinlat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Also write the rendered output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print a human-readable report instead of JSON.
    #[arg(long, global = true)]
    markdown: bool,
    /// Directory holding the certificates that gate later commands.
    #[arg(long, global = true, env = "THINLAT_ARTIFACTS", default_value = "thinlat-artifacts")]
    artifacts: PathBuf,
    /// Directory for the word-prefix memo of the Laurent families.
    #[arg(long, global = true, env = "THINLAT_CACHE")]
    cache: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Relator, longitude, determinants and the intertwiner of the two families.
    Verify {
        #[arg(long, value_enum, default_value_t = Family::Both)]
        family: Family,
        /// Radius of the trace table.
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Two-basis certificate that all traces are integral Laurent polynomials.
    TraceCert {
        /// 0 selects the shortlex basis.
        #[arg(long, default_value_t = 0)]
        seed_a: u64,
        #[arg(long, default_value_t = 1)]
        seed_b: u64,
        /// Radius of the direct-trace cross-check.
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// The invariant Hermitian form and its invariance on a corpus.
    Form {
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Specialization at the positive unit of Q(sqrt d).
    Specialize {
        #[arg(long)]
        d: i64,
        /// Use u = epsilon^(2k).
        #[arg(long, default_value_t = 1)]
        unit_power: u32,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Adjoint span, inverse eigenvalues and proximality at a rational t.
    Density {
        /// A rational "p/q".
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Summarizes every certificate in the artifact directory.
    Report,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Rho,
    Phi,
    Both,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Gate(String),
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "input error: {s}"),
            CliError::Gate(s) => write!(f, "refused: {s}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

const EXIT_FAILED: u8 = 2;
const EXIT_INPUT: u8 = 3;

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    print!("{text}");
    if let Some(path) = &common.out {
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let store = Store::new(&cli.common.artifacts);
    let ctx = commands::Context::new(&cli.common);
    let (name, cert): (String, Certificate) = match cli.command {
        Command::Verify { family, radius } => ("verify".into(), commands::verify(&ctx, family, radius)?),
        Command::TraceCert { seed_a, seed_b, radius } => {
            ("trace-cert".into(), commands::trace_cert(&ctx, &store, seed_a, seed_b, radius)?)
        }
        Command::Form { radius } => ("form".into(), commands::form(&ctx, &store, radius)?),
        Command::Specialize { d, unit_power, radius } => (
            format!("specialize-d{d}-k{unit_power}"),
            commands::specialize(&ctx, &store, d, unit_power, radius)?,
        ),
        Command::Density { t, radius } => {
            let t0 = commands::parse_rational(&t)?;
            let stem = t0.to_string().replace('/', "_").replace('-', "m");
            (format!("density-t{stem}"), commands::density(&ctx, &store, &t0, radius)?)
        }
        Command::Report => {
            let (passed, json, md) = markdown::report(&store)?;
            emit(&cli.common, if cli.common.markdown { &md } else { &json })?;
            return Ok(passed);
        }
    };
    store.write(&name, &cert)?;
    let text = if cli.common.markdown { markdown::render(&cert) } else { cert.to_json() };
    emit(&cli.common, &text)?;
    ctx.save_cache();
    Ok(cert.passed())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
