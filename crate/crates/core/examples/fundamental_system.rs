// Characteristic roots and the fundamental system of
// `y^ΔΔ + a y^Δ + b y = 0`, including the double-root case.
//
// ```bash
// cargo run --example fundamental_system
// ```

use socloss::{delta_exp, ominus, solve_second_order, RootKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let h = 0.5;
    let distinct = solve_second_order(-1.0, -2.0, h)?;
    println!(
        "a = -1, b = -2: {:?}, lambda = ({}, {})",
        distinct.kind(),
        distinct.lambda1(),
        distinct.lambda2()
    );
    for k in 0..4 {
        let t = k as f64 * h;
        let (y1, y2) = distinct.basis(t)?;
        println!("  t = {t}: y1 = {y1:.6}, y2 = {y2:.6}, W = {:.6}", distinct.wronskian(t)?);
    }

    let double = solve_second_order(-2.0, 1.0, h)?;
    assert_eq!(double.kind(), RootKind::DoubleRoot);
    println!("a = -2, b = 1: {:?}, lambda = {}", double.kind(), double.lambda1());

    let p = 0.8;
    let e = delta_exp(p, 2.0, 0.0, h)?;
    let e_inv = delta_exp(ominus(p, h)?, 2.0, 0.0, h)?;
    println!("e_p(2,0) = {e}, e_p * e_(ominus p) = {}", e * e_inv);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
