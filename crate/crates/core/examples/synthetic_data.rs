// Prints two years of monthly data generated from the model itself, in the
// input CSV format (this is how `fixtures/synthetic.csv` was made).
//
// ```bash
// cargo run --example synthetic_data > data.csv
// ```

use std::io::Write;

use socloss::{synthetic_year, ModelParams};

/// `(year, steps, pi0, piT)`: each year is the minimizer on `h = 11/steps`.
const YEARS: [(i32, usize, f64, f64); 2] = [(2000, 50, 15.38, 12.1), (2001, 55, 12.4, 14.0)];

pub fn write_csv(out: &mut dyn Write) -> Result<(), Box<dyn std::error::Error>> {
    let template = ModelParams::reference(1.0, 1.0, 11.0)?;
    writeln!(out, "date,inflation,unemployment")?;
    for (year, steps, pi0, pi_t) in YEARS {
        for o in synthetic_year(&template, steps, pi0, pi_t, year)?.observations() {
            writeln!(out, "{},{:.12},{:.3}", o.date, o.inflation, o.unemployment)?;
        }
    }
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    write_csv(&mut std::io::stdout().lock())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
