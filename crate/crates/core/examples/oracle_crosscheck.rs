// Cross-checks the closed form against a direct tridiagonal solve of the
// discrete quadratic program, and probes minimality with perturbations.
//
// ```bash
// cargo run --example oracle_crosscheck
// ```

use socloss::oracle::validate;
use socloss::{optimal_path_hz, perturbation_check, qp_minimize, ModelParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::reference(15.38, 12.1, 11.0)?;
    let h = 0.22;
    let closed = optimal_path_hz(&params, h)?.grid_function()?;
    let qp = qp_minimize(&params, h)?;
    let deviation = closed
        .values()
        .iter()
        .zip(qp.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("h = {h}: max |closed - qp| = {deviation:.3e}");

    let probe = perturbation_check(&params, h, &closed, 100, 7)?;
    println!("smallest loss increase over 400 perturbations: {:.3e}", probe.min_gap);

    let summary = validate(42, 50, 200)?;
    println!(
        "{} random instances: deviation {:.1e}, residual {:.1e}, objective gap {:.1e}",
        summary.instances, summary.max_deviation, summary.max_residual, summary.max_objective_gap
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
