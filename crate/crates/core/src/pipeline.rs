//! Monthly inflation/unemployment data, the sampling-period sweep and its
//! report tables.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elmodel::{
    optimal_path_continuous, optimal_path_hz, social_loss_continuous, social_loss_hz,
    ClosedFormPath, ModelParams, DEFAULT_QUADRATURE_TOL,
};
use crate::error::{Error, Result};
use crate::timescale::{GridFunction, PeriodicScale};

/// Default candidate step counts for a twelve-month window.
pub const DEFAULT_STEPS: std::ops::RangeInclusive<usize> = 12..=200;

/// Largest step count a sweep accepts.
pub const MAX_SWEEP_STEPS: usize = 100_000;

pub const CSV_HEADER: [&str; 3] = ["date", "inflation", "unemployment"];

/// A calendar month, written `YYYY-MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct YearMonth {
    pub year: i32,
    pub month: u8,
}

impl YearMonth {
    pub fn new(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::Range(format!("month {month} out of range")));
        }
        Ok(Self { year, month })
    }

    pub fn next(self) -> Self {
        if self.month == 12 {
            Self { year: self.year + 1, month: 1 }
        } else {
            Self { year: self.year, month: self.month + 1 }
        }
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("expected YYYY-MM, got `{s}`");
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year = y.parse::<i32>().map_err(|_| bad())?;
        let month = m.parse::<u8>().map_err(|_| bad())?;
        YearMonth::new(year, month).map_err(|_| bad())
    }
}

/// One month of data; rates in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub date: YearMonth,
    pub inflation: f64,
    pub unemployment: f64,
}

/// Consecutive monthly observations without gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconSeries {
    observations: Vec<Observation>,
}

impl EconSeries {
    pub fn new(observations: Vec<Observation>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::Range("series is empty".into()));
        }
        for (i, pair) in observations.windows(2).enumerate() {
            let expected = pair[0].date.next();
            if pair[1].date <= pair[0].date {
                return Err(Error::Parse {
                    row: i + 2,
                    column: Some("date".into()),
                    message: format!("{} does not follow {}", pair[1].date, pair[0].date),
                });
            }
            if pair[1].date != expected {
                return Err(Error::Gap { missing: expected.to_string() });
            }
        }
        if let Some(o) = observations
            .iter()
            .find(|o| !(o.inflation.is_finite() && o.unemployment.is_finite()))
        {
            return Err(Error::Range(format!("non-finite rate in {}", o.date)));
        }
        Ok(Self { observations })
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn first(&self) -> YearMonth {
        self.observations[0].date
    }

    pub fn last(&self) -> YearMonth {
        self.observations[self.observations.len() - 1].date
    }

    /// `2000` for a single calendar year, `2000-01..2010-12` otherwise.
    pub fn label(&self) -> String {
        let (a, b) = (self.first(), self.last());
        if a.year == b.year && a.month == 1 && b.month == 12 {
            a.year.to_string()
        } else {
            format!("{a}..{b}")
        }
    }

    /// The observations from `start` to `end`, inclusive, all of which must be present.
    pub fn window(&self, start: YearMonth, end: YearMonth) -> Result<Self> {
        if end < start {
            return Err(Error::Range(format!("window {start}..{end} is empty")));
        }
        let picked: Vec<Observation> = self
            .observations
            .iter()
            .filter(|o| o.date >= start && o.date <= end)
            .copied()
            .collect();
        let Some(first) = picked.first() else {
            return Err(Error::Range(format!("no observations in {start}..{end}")));
        };
        if first.date != start {
            return Err(Error::Gap { missing: start.to_string() });
        }
        let last = picked[picked.len() - 1].date;
        if last != end {
            return Err(Error::Gap { missing: last.next().to_string() });
        }
        Self::new(picked)
    }

    /// January to December of `year`.
    pub fn year(&self, year: i32) -> Result<Self> {
        self.window(YearMonth { year, month: 1 }, YearMonth { year, month: 12 })
    }

    /// Calendar years for which all twelve months are present.
    pub fn complete_years(&self) -> Vec<i32> {
        let (a, b) = (self.first(), self.last());
        (a.year..=b.year)
            .filter(|&y| (a.year < y || a.month == 1) && (y < b.year || b.month == 12))
            .collect()
    }
}

/// Parses `date,inflation,unemployment` CSV, optionally keeping only the
/// inclusive window `(start, end)`.
pub fn load_series<R: Read>(source: R, window: Option<(YearMonth, YearMonth)>) -> Result<EconSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let csv_error = |e: csv::Error| {
        let row = e.position().map(|p| p.line() as usize).unwrap_or(0);
        Error::Parse { row, column: None, message: e.to_string() }
    };

    let header = reader.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            row: 1,
            column: None,
            message: format!("expected header `{}`", CSV_HEADER.join(",")),
        });
    }

    let mut observations = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let row = i + 2;
        let field = |col: usize| -> Result<&str> {
            record.get(col).ok_or_else(|| Error::Parse {
                row,
                column: Some(CSV_HEADER[col].into()),
                message: "missing field".into(),
            })
        };
        let date = field(0)?.parse::<YearMonth>().map_err(|message| Error::Parse {
            row,
            column: Some("date".into()),
            message,
        })?;
        let rate = |col: usize| -> Result<f64> {
            let text = field(col)?;
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse {
                    row,
                    column: Some(CSV_HEADER[col].into()),
                    message: format!("`{text}` is not a finite decimal rate"),
                }),
            }
        };
        observations.push(Observation {
            date,
            inflation: rate(1)?,
            unemployment: rate(2)?,
        });
    }

    // Order is checked on the whole file; gaps only matter inside the window.
    for (i, pair) in observations.windows(2).enumerate() {
        if pair[1].date <= pair[0].date {
            return Err(Error::Parse {
                row: i + 3,
                column: Some("date".into()),
                message: format!("{} does not follow {}", pair[1].date, pair[0].date),
            });
        }
    }
    match window {
        Some((start, end)) => {
            if observations.is_empty() {
                return Err(Error::Range("no observations".into()));
            }
            EconSeries { observations }.window(start, end)
        }
        None => EconSeries::new(observations),
    }
}

/// `π_E = p + βu` on the monthly grid `h = 1`.
pub fn expected_inflation(series: &EconSeries, beta: f64) -> Result<GridFunction> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must be positive",
        });
    }
    let scale = PeriodicScale::new(1.0, series.len().saturating_sub(1))?;
    let values = series
        .observations()
        .iter()
        .map(|o| o.inflation + beta * o.unemployment)
        .collect();
    GridFunction::new(scale, values)
}

/// Twelve months of data whose expected inflation is the model's own
/// minimizer on `h = 11/steps`, read at whole months.
///
/// Unemployment follows a fixed gentle ramp and inflation is backed out as
/// `p = π - βu`, so [`expected_inflation`] recovers the path up to rounding.
pub fn synthetic_year(template: &ModelParams, steps: usize, pi0: f64, pi_t: f64, year: i32) -> Result<EconSeries> {
    const HORIZON: f64 = 11.0;
    let params = template.with_boundary(pi0, pi_t, HORIZON)?;
    let path = optimal_path_hz(&params, HORIZON / steps as f64)?;
    let mut date = YearMonth::new(year, 1)?;
    let mut observations = Vec::with_capacity(12);
    for k in 0..12 {
        let pi = path.extended_value(k as f64)?;
        let unemployment = 4.0 + 0.125 * k as f64;
        observations.push(Observation {
            date,
            inflation: pi - params.beta() * unemployment,
            unemployment,
        });
        date = date.next();
    }
    EconSeries::new(observations)
}

/// `Λ_E`: the unit-step functional evaluated on empirical expected inflation.
pub fn empirical_loss(pi_e: &GridFunction, params: &ModelParams) -> Result<f64> {
    social_loss_hz(params, 1.0, pi_e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub steps: usize,
    pub h: f64,
    /// `Λ_h` at the closed-form minimizer.
    pub lambda_h: f64,
    /// `|Λ_h - Λ_E|`.
    pub abs_error: f64,
    pub path: ClosedFormPath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCandidate {
    pub steps: usize,
    pub h: f64,
    pub error: String,
    pub reason: String,
}

/// `(Λ_x - Λ_E)/Λ_E` for the best time scale, the continuous and the
/// discrete model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeErrors {
    pub h: Option<f64>,
    pub continuous: f64,
    pub discrete: f64,
}

/// Result of one sampling-period sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub label: String,
    pub params: ModelParams,
    /// `π_E` at months `0..=T`.
    pub empirical: Vec<f64>,
    pub lambda_e: f64,
    pub lambda_c: f64,
    pub lambda_d: f64,
    pub continuous_path: ClosedFormPath,
    pub discrete_path: ClosedFormPath,
    /// Candidates in ascending step count.
    pub candidates: Vec<Candidate>,
    pub skipped: Vec<SkippedCandidate>,
    /// Index into `candidates` of the smallest absolute error.
    pub best: Option<usize>,
}

impl SweepReport {
    pub fn best_candidate(&self) -> Option<&Candidate> {
        self.best.map(|i| &self.candidates[i])
    }

    pub fn best_h(&self) -> Option<f64> {
        self.best_candidate().map(|c| c.h)
    }

    pub fn relative_errors(&self) -> RelativeErrors {
        let rel = |x: f64| (x - self.lambda_e) / self.lambda_e;
        RelativeErrors {
            h: self.best_candidate().map(|c| rel(c.lambda_h)),
            continuous: rel(self.lambda_c),
            discrete: rel(self.lambda_d),
        }
    }

    /// Months `0..=T`.
    pub fn months(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.empirical.len()).map(|k| k as f64)
    }
}

/// Sweeps `h = T/N` over `steps` and picks the step whose minimal loss is
/// closest to the empirical loss. `T` is the number of months in `series`
/// minus one; the boundary values come from its first and last month.
pub fn sweep_h(series: &EconSeries, template: &ModelParams, steps: &[usize]) -> Result<SweepReport> {
    let pi_e = expected_inflation(series, template.beta())?;
    let empirical = pi_e.values().to_vec();
    let horizon = pi_e.scale().horizon();
    let params = template.with_boundary(empirical[0], empirical[empirical.len() - 1], horizon)?;

    let lambda_e = empirical_loss(&pi_e, &params)?;
    let continuous_path = optimal_path_continuous(&params)?;
    let lambda_c = social_loss_continuous(&params, &continuous_path, DEFAULT_QUADRATURE_TOL)?;
    let discrete_path = optimal_path_hz(&params, 1.0)?;
    let lambda_d = social_loss_hz(&params, 1.0, &discrete_path.grid_function()?)?;

    let mut steps = steps.to_vec();
    steps.sort_unstable();
    steps.dedup();
    if let Some(&bad) = steps.iter().find(|&&n| !(3..=MAX_SWEEP_STEPS).contains(&n)) {
        return Err(Error::Range(format!(
            "step count {bad} outside [3, {MAX_SWEEP_STEPS}]"
        )));
    }

    let outcomes: Vec<std::result::Result<Candidate, SkippedCandidate>> = steps
        .par_iter()
        .map(|&n| {
            let h = horizon / n as f64;
            let evaluate = || -> Result<Candidate> {
                let path = optimal_path_hz(&params, h)?;
                let lambda_h = social_loss_hz(&params, h, &path.grid_function()?)?;
                Ok(Candidate {
                    steps: n,
                    h,
                    lambda_h,
                    abs_error: (lambda_h - lambda_e).abs(),
                    path,
                })
            };
            evaluate().map_err(|e| SkippedCandidate {
                steps: n,
                h,
                error: e.name().to_string(),
                reason: e.to_string(),
            })
        })
        .collect();

    let mut candidates = Vec::new();
    let mut skipped = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(c) => candidates.push(c),
            Err(s) => skipped.push(s),
        }
    }
    let best = candidates
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, c)| match best {
            Some((_, e)) if e <= c.abs_error => best,
            _ => Some((i, c.abs_error)),
        })
        .map(|(i, _)| i);

    Ok(SweepReport {
        label: series.label(),
        params,
        empirical,
        lambda_e,
        lambda_c,
        lambda_d,
        continuous_path,
        discrete_path,
        candidates,
        skipped,
        best,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    PlotData,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "markdown" | "md" => Ok(Self::Markdown),
            "csv" => Ok(Self::Csv),
            "plotdata" | "tsv" => Ok(Self::PlotData),
            "json" => Ok(Self::Json),
            other => Err(format!(
                "unknown format `{other}` (expected markdown, csv, plotdata or json)"
            )),
        }
    }
}

/// Fixed ten-significant-digit rendering with a `.` decimal point.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.000000000".into();
    }
    let sci = format!("{x:.9e}");
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific format has an exponent");
    if (-5..=14).contains(&exponent) {
        format!("{:.*}", (9 - exponent).max(0) as usize, x)
    } else {
        sci
    }
}

const VALUE_COLUMNS: [&str; 6] = ["year", "lambda_C", "lambda_E", "lambda_h", "lambda_D", "best_h"];
const RELERR_COLUMNS: [&str; 4] = ["year", "relerr_h", "relerr_C", "relerr_D"];
const PLOT_COLUMNS: [&str; 5] = ["t", "empirical", "continuous", "discrete", "timescale"];

fn table_rows(reports: &[SweepReport]) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let mut values = Vec::new();
    let mut relerrs = Vec::new();
    for r in reports {
        let Some(best) = r.best_candidate() else {
            continue;
        };
        values.push(vec![
            r.label.clone(),
            format_sig(r.lambda_c),
            format_sig(r.lambda_e),
            format_sig(best.lambda_h),
            format_sig(r.lambda_d),
            format_sig(best.h),
        ]);
        let rel = r.relative_errors();
        relerrs.push(vec![
            r.label.clone(),
            format_sig(rel.h.expect("best candidate exists")),
            format_sig(rel.continuous),
            format_sig(rel.discrete),
        ]);
    }
    (values, relerrs)
}

fn markdown_table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    out.push_str(&format!("| {} |\n", header.join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
    for row in rows {
        out.push_str(&format!("| {} |\n", row.join(" | ")));
    }
}

fn csv_table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
}

/// `π(t)` at a month; off-grid months fall back to linear interpolation
/// when the real-exponent reading is undefined.
fn monthly_value(path: &ClosedFormPath, t: f64) -> f64 {
    if let Ok(v) = path.extended_value(t) {
        return v;
    }
    let h = path.h();
    let lo = (t / h).floor() * h;
    let hi = lo + h;
    match (path.value_at(lo), path.value_at(hi)) {
        (Ok(a), Ok(b)) => a + (b - a) * (t - lo) / h,
        _ => f64::NAN,
    }
}

fn plot_block(out: &mut String, r: &SweepReport) {
    out.push_str(&PLOT_COLUMNS.join("\t"));
    out.push('\n');
    for (k, t) in r.months().enumerate() {
        let timescale = r
            .best_candidate()
            .map(|c| monthly_value(&c.path, t))
            .unwrap_or(f64::NAN);
        let cells = [
            k.to_string(),
            format_sig(r.empirical[k]),
            format_sig(monthly_value(&r.continuous_path, t)),
            format_sig(monthly_value(&r.discrete_path, t)),
            format_sig(timescale),
        ];
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
}

/// Renders reports as the loss/best-`h` table followed by the relative-error
/// table (markdown, csv), as monthly path samples (plotdata), or as JSON.
pub fn render_report(reports: &[SweepReport], format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Markdown | ReportFormat::Csv => {
            let (values, relerrs) = table_rows(reports);
            let table = if format == ReportFormat::Markdown {
                markdown_table
            } else {
                csv_table
            };
            table(&mut out, &VALUE_COLUMNS, &values);
            out.push('\n');
            table(&mut out, &RELERR_COLUMNS, &relerrs);
        }
        ReportFormat::PlotData => match reports {
            [single] => plot_block(&mut out, single),
            _ => {
                for (i, r) in reports.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&format!("# {}\n", r.label));
                    plot_block(&mut out, r);
                }
            }
        },
        ReportFormat::Json => {
            out = serde_json::to_string_pretty(reports).expect("reports serialize");
            out.push('\n');
        }
    }
    out
}

/// Reads reports previously rendered with [`ReportFormat::Json`].
pub fn parse_reports(json: &str) -> Result<Vec<SweepReport>> {
    serde_json::from_str(json).map_err(|e| Error::Parse {
        row: e.line(),
        column: None,
        message: e.to_string(),
    })
}
