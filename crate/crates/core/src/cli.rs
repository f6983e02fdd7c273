//! Command-line front end: `solve`, `sweep`, `validate` and `report`.
//!
//! Every flag is global so that `--help` lists all of them; each command
//! reads the flags it needs and ignores the rest.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::elmodel::{optimal_path_hz, social_loss_hz, ModelParams};
use crate::error::{Error, Result};
use crate::oracle;
use crate::pipeline::{self, ReportFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Deviation bound reported by `validate`.
pub const VALIDATE_BOUND: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "socloss",
    version,
    about = "Optimal expected-inflation paths on time scales hZ and sampling-period sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Weight of inflation in the loss [default: 0.5]
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Slope of the Phillips tradeoff [default: 3]
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Expectation-adjustment rate in (0, 1] [default: 0.75]
    #[arg(long = "j", global = true)]
    j: Option<f64>,
    /// Discount rate [default: 0.25]
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Initial expected inflation (solve) [default: 1]
    #[arg(long, global = true)]
    pi0: Option<f64>,
    /// Terminal expected inflation (solve) [default: 1]
    #[arg(long = "piT", global = true)]
    pi_t: Option<f64>,
    /// Horizon (solve) [default: 11]
    #[arg(long = "T", global = true)]
    horizon: Option<f64>,
    /// Step of the time scale hZ (solve) [default: 1]
    #[arg(long, global = true)]
    h: Option<f64>,
    /// Input file: monthly CSV (sweep) or JSON reports (report)
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Calendar year to sweep; all complete years when omitted
    #[arg(long, global = true)]
    year: Option<i32>,
    /// Smallest candidate step count N, h = T/N [default: 12]
    #[arg(long = "n-min", global = true)]
    n_min: Option<usize>,
    /// Largest candidate step count N [default: 200]
    #[arg(long = "n-max", global = true)]
    n_max: Option<usize>,
    /// Seed for random instances (validate) [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of random instances (validate) [default: 200]
    #[arg(long, global = true)]
    instances: Option<usize>,
    /// Output format: markdown, csv, plotdata or json [default: markdown]
    #[arg(long, global = true)]
    format: Option<ReportFormat>,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the closed-form minimizer on hZ and its loss
    Solve,
    /// Sweep h = T/N over monthly data and tabulate the losses
    Sweep,
    /// Cross-check closed forms against the tridiagonal minimizer
    Validate,
    /// Render stored JSON sweep reports
    Report,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl Cli {
    fn params(&self) -> Result<ModelParams> {
        ModelParams::new(
            self.alpha.unwrap_or(ModelParams::REFERENCE_ALPHA),
            self.beta.unwrap_or(ModelParams::REFERENCE_BETA),
            self.j.unwrap_or(ModelParams::REFERENCE_J),
            self.delta.unwrap_or(ModelParams::REFERENCE_DELTA),
            self.pi0.unwrap_or(1.0),
            self.pi_t.unwrap_or(1.0),
            self.horizon.unwrap_or(11.0),
        )
    }
}

/// Parses `argv` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };

    let outcome = match cli.command {
        Command::Solve => solve(&cli),
        Command::Sweep => sweep(&cli),
        Command::Validate => validate(&cli),
        Command::Report => report(&cli),
    };
    let emitted = outcome.and_then(|(text, ok)| {
        match &cli.out {
            Some(path) => fs::write(path, &text).map_err(Error::from)?,
            None => stdout.write_all(text.as_bytes()).map_err(Error::from)?,
        }
        Ok(ok)
    });
    match emitted {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.name());
            EXIT_FAILURE
        }
    }
}

/// Grid times such as `0.66` without binary noise.
fn format_time(t: f64) -> String {
    let text = format!("{t:.10}");
    text.trim_end_matches('0').trim_end_matches('.').to_string()
}

type Output = std::result::Result<(String, bool), Failure>;

fn solve(cli: &Cli) -> Output {
    let params = cli.params()?;
    let h = cli.h.unwrap_or(1.0);
    let path = optimal_path_hz(&params, h)?;
    let grid = path.grid_function()?;
    let loss = social_loss_hz(&params, h, &grid)?;

    let mut out = format!(
        "# h = {}, N = {}, T = {}\nt\tpi\n",
        format_time(h),
        grid.scale().steps(),
        format_time(params.horizon())
    );
    for (t, v) in grid.scale().times().zip(grid.values()) {
        out.push_str(&format!(
            "{}\t{}\n",
            format_time(t),
            pipeline::format_sig(*v)
        ));
    }
    out.push_str(&format!("lambda_h\t{}\n", pipeline::format_sig(loss)));
    Ok((out, true))
}

fn sweep(cli: &Cli) -> Output {
    let data = cli
        .data
        .as_ref()
        .ok_or_else(|| Failure::Usage("sweep needs --data <csv>".into()))?;
    let n_min = cli.n_min.unwrap_or(*pipeline::DEFAULT_STEPS.start());
    let n_max = cli.n_max.unwrap_or(*pipeline::DEFAULT_STEPS.end());
    if n_min > n_max {
        return Err(Failure::Usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
    }
    let steps: Vec<usize> = (n_min..=n_max).collect();
    let template = cli.params()?;

    let file = fs::File::open(data).map_err(Error::from)?;
    let window = cli.year.map(|y| {
        (
            pipeline::YearMonth { year: y, month: 1 },
            pipeline::YearMonth { year: y, month: 12 },
        )
    });
    let series = pipeline::load_series(file, window)?;
    let windows = match cli.year {
        Some(_) => vec![series],
        None => {
            let years = series.complete_years();
            if years.is_empty() {
                return Err(Error::Range("no complete calendar year in the data".into()).into());
            }
            years
                .into_iter()
                .map(|y| series.year(y))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let reports = windows
        .iter()
        .map(|w| pipeline::sweep_h(w, &template, &steps))
        .collect::<Result<Vec<_>>>()?;
    let format = cli.format.unwrap_or(ReportFormat::Markdown);
    Ok((pipeline::render_report(&reports, format), true))
}

fn validate(cli: &Cli) -> Output {
    let seed = cli.seed.unwrap_or(42);
    let instances = cli.instances.unwrap_or(200);
    let summary = oracle::validate(seed, instances, 500)?;
    let ok = summary.max_deviation <= VALIDATE_BOUND
        && summary.max_residual <= VALIDATE_BOUND
        && summary.all_pivots_positive;
    let verdict = if ok { "ok" } else { "FAILED" };
    let out = format!(
        "seed\t{seed}\ninstances\t{instances}\nmax deviation\t{:e}\nmax residual\t{:e}\n\
         max objective gap\t{:e}\npivots positive\t{}\nmax deviation <= 1e-9: {verdict}\n",
        summary.max_deviation,
        summary.max_residual,
        summary.max_objective_gap,
        summary.all_pivots_positive,
    );
    Ok((out, ok))
}

fn report(cli: &Cli) -> Output {
    let data = cli
        .data
        .as_ref()
        .ok_or_else(|| Failure::Usage("report needs --data <json>".into()))?;
    let text = fs::read_to_string(data).map_err(Error::from)?;
    let reports = pipeline::parse_reports(&text)?;
    let format = cli.format.unwrap_or(ReportFormat::Markdown);
    Ok((pipeline::render_report(&reports, format), true))
}
