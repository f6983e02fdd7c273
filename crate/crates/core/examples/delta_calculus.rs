// Delta derivative, delta integral and jump operators on `hZ`.
//
// ```bash
// cargo run --example delta_calculus
// ```

use socloss::{GridFunction, PeriodicScale};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scale = PeriodicScale::from_horizon(2.0, 8)?;
    println!("h = {}, N = {}, T = {}", scale.h(), scale.steps(), scale.horizon());

    let jumps = scale.jump_operators(0.5)?;
    println!("sigma(0.5) = {}, rho(0.5) = {}, mu = {}", jumps.sigma, jumps.rho, jumps.mu);

    // On hZ the derivative of t^2 is t + sigma(t) = 2t + h.
    let square = GridFunction::from_fn(scale, |t| t * t)?;
    let derivative = square.delta_derivative()?;
    for (k, d) in derivative.values().iter().enumerate() {
        let t = scale.time(k);
        assert!((d - (2.0 * t + scale.h())).abs() < 1e-12);
    }
    println!("(t^2)^delta = 2t + h on every grid point");

    // The integral of a delta derivative telescopes.
    let integral = derivative.delta_integral(0.0, 1.75)?;
    println!("int_0^1.75 (t^2)^delta dt = {integral} (expected {})", 1.75 * 1.75);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
