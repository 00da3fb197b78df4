//! `soliton-lab`: solve radial translator profiles, run the verification
//! battery, fit far-field coefficients and emit CSV/JSON artifacts.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on usage or validation errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use soliton_core::asymptotics::fit_default;
use soliton_core::report::{emit_fit, emit_profile, emit_report, emit_scan, emit_table, Format};
use soliton_core::sweep::{fit_table, table_cells};
use soliton_core::verify::{default_scan, run_battery};
use soliton_core::{solve_profile, Execution, ModelParams, SolitonError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "SOLITON_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "soliton-lab", version)]
#[command(about = "Radial translating solitons of power mean curvature flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the radial profile and write t,r,dr,ddr samples
    Solve(RunArgs),
    /// Run the full check battery (JSON by default)
    Verify(RunArgs),
    /// Fit far-field expansion coefficients
    Asymptotics(RunArgs),
    /// Scan the gradient-estimate ratio over balls along e_1
    ScanGradient(RunArgs),
    /// Fitted coefficients for n in 2..=6 and alpha in {0.5, 1, 2, 3}
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Output path; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Ambient dimension (>= 2)
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    /// Curvature exponent (> 0)
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 200.0)]
    tmax: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Lower bound on the fit horizon; each cell uses at least its default
    #[arg(long, default_value_t = 200.0)]
    tmax: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

enum Failure {
    Usage(String),
    Check,
}

impl From<SolitonError> for Failure {
    fn from(e: SolitonError) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Emitted {
    text: String,
    pass: bool,
}

fn params(args: &RunArgs) -> Result<ModelParams, Failure> {
    Ok(ModelParams::new(args.n, args.alpha)?)
}

fn format_or(output: &Output, default: Format) -> Format {
    output.format.map(Format::from).unwrap_or(default)
}

fn dispatch(command: &Command, exec: Execution) -> Result<(Emitted, &Output), Failure> {
    match command {
        Command::Solve(a) => {
            let profile = solve_profile(&params(a)?, a.tmax, a.tol)?;
            let text = emit_profile(&profile, format_or(&a.output, Format::Csv));
            Ok((Emitted { text, pass: true }, &a.output))
        }
        Command::Verify(a) => {
            let p = params(a)?;
            let battery = run_battery(&p, a.tmax, a.tol, exec)?;
            let format = format_or(&a.output, Format::Json);
            let text = emit_report(&p, &battery.checks, Some(&battery.fit), format);
            Ok((
                Emitted {
                    text,
                    pass: battery.all_pass(),
                },
                &a.output,
            ))
        }
        Command::Asymptotics(a) => {
            let fit = fit_default(&params(a)?, a.tmax, a.tol)?;
            let text = emit_fit(&fit, format_or(&a.output, Format::Csv));
            Ok((Emitted { text, pass: true }, &a.output))
        }
        Command::ScanGradient(a) => {
            let p = params(a)?;
            let profile = solve_profile(&p, a.tmax, a.tol)?;
            let scan = default_scan(&profile)?;
            let pass = scan.sup_ratio.is_finite();
            let text = emit_scan(&p, &scan, format_or(&a.output, Format::Csv));
            Ok((Emitted { text, pass }, &a.output))
        }
        Command::Table(a) => {
            // A report, not a check: rows are emitted whatever the deviations.
            let fits = fit_table(&table_cells(), a.tmax, a.tol, exec)?;
            let text = emit_table(&fits, format_or(&a.output, Format::Csv));
            Ok((Emitted { text, pass: true }, &a.output))
        }
    }
}

/// Worker count from `SOLITON_LAB_THREADS`, if set.
fn thread_cap() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => Err(Failure::Usage(format!(
                "{THREADS_ENV} must be a positive integer (got '{v}')"
            ))),
        },
    }
}

#[cfg(feature = "parallel")]
fn run_with_threads<R: Send>(cap: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, Failure> {
    match cap {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn run_with_threads<R: Send>(_cap: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, Failure> {
    Ok(f())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let cap = thread_cap()?;
    let exec = match cap {
        Some(1) => Execution::Sequential,
        _ => Execution::default(),
    };
    let (emitted, output) = run_with_threads(cap, || dispatch(&cli.command, exec))??;
    match &output.out {
        Some(path) => std::fs::write(path, &emitted.text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => out
            .write_all(emitted.text.as_bytes())
            .map_err(|e| Failure::Usage(e.to_string()))?,
    }
    if emitted.pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Check) => {
            let _ = writeln!(err, "soliton-lab: one or more checks failed");
            EXIT_CHECK_FAILED
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "soliton-lab: {msg}");
            EXIT_USAGE
        }
    }
}
