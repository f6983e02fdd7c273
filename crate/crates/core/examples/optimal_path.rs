// Closed-form minimizers of the social loss: unit step, a finer step, and
// the continuous limit.
//
// ```bash
// cargo run --example optimal_path
// ```

use socloss::elmodel::DEFAULT_QUADRATURE_TOL;
use socloss::{
    el_coefficients, optimal_path_continuous, optimal_path_hz, social_loss_continuous, social_loss_hz,
    ModelParams,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::reference(1.0, 1.0, 11.0)?;
    for h in [1.0, 0.22, 0.011] {
        let system = el_coefficients(&params, h)?;
        let path = optimal_path_hz(&params, h)?;
        let grid = path.grid_function()?;
        println!(
            "h = {h:<6} Omega = {:.6} roots = ({:.6}, {:.6}) loss = {:.10} residual = {:.1e}",
            system.omega(),
            system.roots().lambda1(),
            system.roots().lambda2(),
            social_loss_hz(&params, h, &grid)?,
            system.residual(&grid)?,
        );
    }
    let continuous = optimal_path_continuous(&params)?;
    let [r1, r2] = continuous.bases();
    println!(
        "continuous    rates = ({r1:.6}, {r2:.6}) loss = {:.10}",
        social_loss_continuous(&params, &continuous, DEFAULT_QUADRATURE_TOL)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
