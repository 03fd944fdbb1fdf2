use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cvsep_cli::{range::parse_range, CliError, CliResult, DEFAULT_AB, EXIT_PARSE};

#[derive(Parser)]
#[command(name = "cvsep", version, about = "Separability analysis for two-mode Gaussian covariance matrices")]
struct Cli {
    /// Numerical tolerance; overrides `tol` in the input document [default: 1e-10]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write data to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a state as separable, entangled or nonphysical
    Classify { input: PathBuf },
    /// Reduce a state to standard form
    StandardForm { input: PathBuf },
    /// Tabulate the three |c1| bounds over an (a, b, t) grid as CSV
    Scan {
        /// start:stop:count or a comma list [default: 0.5,0.75,1,1.5,2,5]
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// c2/c1 ratio values
        #[arg(long, default_value = "0:1:11", allow_hyphen_values = true, conflicts_with = "t_steps")]
        t: String,
        /// Shorthand for --t 0:1:N
        #[arg(long)]
        t_steps: Option<usize>,
    },
    /// Check the criterion hierarchy on seeded random states
    Audit {
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// Optimal squeezing parameters for (a, b, t)
    Squeeze {
        #[arg(allow_hyphen_values = true)]
        a: f64,
        #[arg(allow_hyphen_values = true)]
        b: f64,
        #[arg(allow_hyphen_values = true)]
        t: f64,
    },
}

fn axis(spec: Option<&str>) -> Result<Vec<f64>, CliError> {
    match spec {
        Some(s) => Ok(parse_range(s)?),
        None => Ok(DEFAULT_AB.to_vec()),
    }
}

fn run(cli: Cli) -> CliResult {
    let mut stderr = io::stderr();
    let mut sink: Box<dyn Write> = match (&cli.out, &cli.command) {
        (Some(p), cmd) if !matches!(cmd, Command::Scan { .. }) => Box::new(
            std::fs::File::create(p).map_err(|e| CliError::Unwritable(format!("{}: {e}", p.display())))?,
        ),
        _ => Box::new(io::stdout().lock()),
    };
    let code = match cli.command {
        Command::Classify { input } => cvsep_cli::cmd_classify(&input, cli.tol, &mut sink, &mut stderr),
        Command::StandardForm { input } => cvsep_cli::cmd_standard_form(&input, &mut sink, &mut stderr),
        Command::Scan { a, b, t, t_steps } => {
            let t = match t_steps {
                Some(n) => parse_range(&format!("0:1:{n}"))?,
                None => parse_range(&t)?,
            };
            let (a, b) = (axis(a.as_deref())?, axis(b.as_deref())?);
            cvsep_cli::cmd_scan(&a, &b, &t, cli.out.as_deref(), &mut sink)
        }
        Command::Audit { samples } => cvsep_cli::cmd_audit(samples, cli.seed, cli.tol, &mut sink),
        Command::Squeeze { a, b, t } => cvsep_cli::cmd_squeeze(a, b, t, &mut sink),
    }?;
    sink.flush().map_err(|e| CliError::Unwritable(e.to_string()))?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
