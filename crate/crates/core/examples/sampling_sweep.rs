// Loads monthly data, sweeps the sampling period for one year and prints
// the report in every format.
//
// ```bash
// cargo run --example sampling_sweep
// ```

use std::fs::File;

use socloss::{load_series, render_report, sweep_h, ModelParams, ReportFormat};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/synthetic.csv");
    let series = load_series(File::open(path)?, None)?;
    let template = ModelParams::reference(1.0, 1.0, 11.0)?;

    let report = sweep_h(&series.year(2000)?, &template, &[50, 55, 100, 110])?;
    for c in &report.candidates {
        println!("N = {:>3}  h = {:.4}  loss = {:.6}  |error| = {:.6}", c.steps, c.h, c.lambda_h, c.abs_error);
    }
    println!("best h = {:?}\n", report.best_h());

    for format in [ReportFormat::Markdown, ReportFormat::Csv, ReportFormat::PlotData] {
        println!("{}", render_report(std::slice::from_ref(&report), format));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
