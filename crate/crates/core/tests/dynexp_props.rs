use proptest::prelude::*;
use socloss::{delta_exp, general_solution, ominus, solve_second_order, PeriodicScale, RootKind};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Coefficient `p` and step `h` with `1 + p h` bounded away from zero.
fn regressive() -> impl Strategy<Value = (f64, f64)> {
    (-3.0f64..3.0, 0.01f64..1.0).prop_filter("regressive", |(p, h)| (1.0 + p * h).abs() > 0.05)
}

/// `y^ΔΔ + a y^Δ + b y` at every point of `[0, T]^{κ²}`, divided by `max|y|`.
fn residual(alpha: f64, beta: f64, values: &socloss::GridFunction) -> f64 {
    let d1 = values.delta_derivative().unwrap();
    let d2 = d1.delta_derivative().unwrap();
    let worst = d2
        .values()
        .iter()
        .zip(d1.values())
        .zip(values.values())
        .map(|((dd, d), y)| (dd + alpha * d + beta * y).abs())
        .fold(0.0, f64::max);
    worst / values.max_abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exponential_identities((p, h) in regressive(), k in 0i64..40, s in 0i64..40) {
        let t = k as f64 * h;
        let t0 = s as f64 * h;
        let e = delta_exp(p, t, t0, h).unwrap();
        let next = delta_exp(p, t + h, t0, h).unwrap();
        prop_assert!(rel(next, (1.0 + h * p) * e) <= 1e-12);

        let q = ominus(p, h).unwrap();
        prop_assert!(rel(e * delta_exp(q, t, t0, h).unwrap(), 1.0) <= 1e-12);

        prop_assert_eq!(delta_exp(0.0, t, t0, h).unwrap(), 1.0);
        prop_assert_eq!(delta_exp(p, t, t, h).unwrap(), 1.0);
    }
}

fn equation() -> impl Strategy<Value = (f64, f64, f64)> {
    (-3.0f64..3.0, 0.0f64..1.0, 0.05f64..1.0)
        .prop_map(|(alpha, frac, h)| {
            // b ≤ a²/4 keeps the roots real; spread b below that bound.
            let beta = alpha * alpha / 4.0 - 3.0 * frac;
            (alpha, beta, h)
        })
        .prop_filter("regressive", |(a, b, h)| {
            let g = 1.0 - a * h + b * h * h;
            g.abs() > 0.05 && (a * a - 4.0 * b) > 1e-6
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn basis_solves_the_equation((alpha, beta, h) in equation(), c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let fs = solve_second_order(alpha, beta, h).unwrap();
        prop_assert_eq!(fs.kind(), RootKind::DistinctRoots);
        for lambda in [fs.lambda1(), fs.lambda2()] {
            let phi = lambda * lambda + alpha * lambda + beta;
            prop_assert!(phi.abs() <= 1e-12 * (1.0 + alpha.abs() + beta.abs()) * (1.0 + lambda * lambda));
        }
        let scale = PeriodicScale::new(h, 20).unwrap();
        let y = general_solution(fs, c1, c2).sample(scale).unwrap();
        prop_assert!(residual(alpha, beta, &y) <= 1e-10);
        for k in 0..20 {
            prop_assert!(fs.wronskian(scale.time(k)).unwrap().abs() > 0.0);
        }
    }

    #[test]
    fn double_root_basis_solves_the_equation(p in -3.0f64..3.0, h in 0.05f64..1.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        prop_assume!((1.0 + p * h).abs() > 0.05);
        let (alpha, beta) = (-2.0 * p, p * p);
        let fs = solve_second_order(alpha, beta, h).unwrap();
        prop_assert_eq!(fs.kind(), RootKind::DoubleRoot);
        let scale = PeriodicScale::new(h, 20).unwrap();
        let y = general_solution(fs, c1, c2).sample(scale).unwrap();
        prop_assert!(residual(alpha, beta, &y) <= 1e-10);
        for k in 0..20 {
            prop_assert!(fs.wronskian(scale.time(k)).unwrap().abs() > 0.0);
        }
    }
}

#[test]
fn wronskian_matches_sampled_definition() {
    for (alpha, beta, h) in [(-0.5, -0.5, 1.0), (1.0, -2.0, 0.25), (-2.0, 1.0, 0.5)] {
        let fs = solve_second_order(alpha, beta, h).unwrap();
        let scale = PeriodicScale::new(h, 12).unwrap();
        let y1 = socloss::GridFunction::try_from_fn(scale, |t| Ok(fs.basis(t)?.0)).unwrap();
        let y2 = socloss::GridFunction::try_from_fn(scale, |t| Ok(fs.basis(t)?.1)).unwrap();
        let (d1, d2) = (y1.delta_derivative().unwrap(), y2.delta_derivative().unwrap());
        for k in 0..12 {
            let w = y1.values()[k] * d2.values()[k] - y2.values()[k] * d1.values()[k];
            assert!(rel(w, fs.wronskian(scale.time(k)).unwrap()) < 1e-12, "{alpha} {beta} {k}");
        }
    }
}

#[test]
fn reference_economy_roots_at_unit_step() {
    // Ω = 2.125, A = -3.90625, B = 3.375 at h = 1
    let fs = solve_second_order(-3.90625 / 2.125, -3.375 / 2.125, 1.0).unwrap();
    assert!((fs.lambda1() - 2.47893).abs() < 5e-6);
    assert!((fs.lambda2() + 0.64069).abs() < 5e-6);
    // independent polynomial evaluation in the cleared-denominator form
    for lambda in [fs.lambda1(), fs.lambda2()] {
        let cleared = 2.125 * lambda * lambda - 3.90625 * lambda - 3.375;
        assert!(cleared.abs() < 1e-12);
    }
}

#[test]
fn continuous_limit_of_exponential() {
    let p: f64 = 0.7;
    let exact = p.exp();
    let slopes: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&h| (delta_exp(p, 1.0, 0.0, h).unwrap() - exact).abs() / h)
        .collect();
    // (1 + ph)^(1/h) = e^p (1 - p²h/2 + O(h²))
    let constant = p * p * exact / 2.0;
    for slope in &slopes {
        assert!((slope - constant).abs() < 0.02 * constant, "{slopes:?}");
    }
    // roots do not depend on h
    let a = solve_second_order(-3.0, 2.0, 0.0).unwrap();
    let b = solve_second_order(-3.0, 2.0, 0.1).unwrap();
    assert_eq!((a.lambda1(), a.lambda2()), (b.lambda1(), b.lambda2()));
}
