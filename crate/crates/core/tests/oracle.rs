use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use socloss::oracle::{cross_check, random_instance, validate, StationaritySystem};
use socloss::{
    el_residual, optimal_path_hz, perturbation_check, qp_minimize, social_loss_hz, FundamentalSystem,
    GridFunction, ModelParams, PeriodicScale,
};

fn loss_at(p: &ModelParams, h: f64, values: &[f64]) -> f64 {
    let scale = PeriodicScale::from_horizon(p.horizon(), values.len() - 1).unwrap();
    social_loss_hz(p, h, &GridFunction::new(scale, values.to_vec()).unwrap()).unwrap()
}

/// Three steps leave two interior unknowns; the objective is quadratic, so its
/// gradient and Hessian follow from central differences and the minimizer
/// from Cramer's rule.
#[test]
fn three_step_problem_by_hand() {
    let p = ModelParams::reference(2.0, 5.0, 3.0).unwrap();
    let h = 1.0;
    let f = |x: f64, y: f64| loss_at(&p, h, &[2.0, x, y, 5.0]);
    let e = 1.0;
    let gx = (f(e, 0.0) - f(-e, 0.0)) / (2.0 * e);
    let gy = (f(0.0, e) - f(0.0, -e)) / (2.0 * e);
    let hxx = (f(e, 0.0) - 2.0 * f(0.0, 0.0) + f(-e, 0.0)) / (e * e);
    let hyy = (f(0.0, e) - 2.0 * f(0.0, 0.0) + f(0.0, -e)) / (e * e);
    let hxy = (f(e, e) - f(e, -e) - f(-e, e) + f(-e, -e)) / (4.0 * e * e);
    let det = hxx * hyy - hxy * hxy;
    assert!(hxx > 0.0 && det > 0.0);
    let x = (-gx * hyy + gy * hxy) / det;
    let y = (-gy * hxx + gx * hxy) / det;

    let closed = optimal_path_hz(&p, h).unwrap().grid_function().unwrap();
    let qp = qp_minimize(&p, h).unwrap();
    for path in [closed.values(), qp.values()] {
        assert!((path[1] - x).abs() < 1e-10, "{} vs {x}", path[1]);
        assert!((path[2] - y).abs() < 1e-10, "{} vs {y}", path[2]);
    }
}

#[test]
fn stationarity_system_is_symmetric_positive_tridiagonal() {
    let p = ModelParams::reference(1.0, 1.0, 11.0).unwrap();
    let sys = StationaritySystem::assemble(&p, 0.22).unwrap();
    assert_eq!(sys.dimension(), 49);
    assert_eq!(sys.off_diag().len(), 48);
    assert!(sys.diag().iter().all(|&d| d > 0.0));
    let solution = sys.solve().unwrap();
    assert!(solution.pivots.iter().all(|&p| p > 0.0));
}

#[test]
fn closed_form_and_quadratic_program_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let check = cross_check(&random_instance(&mut rng, 300)).unwrap();
        assert!(check.deviation <= 1e-9, "{check:?}");
        assert!(check.residual <= 1e-9, "{check:?}");
        assert!(check.objective_gap <= 1e-12, "{check:?}");
        assert!(check.positive_pivots);
    }
}

#[test]
fn validation_is_deterministic() {
    let a = validate(42, 20, 100).unwrap();
    let b = validate(42, 20, 100).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.instances, 20);
}

#[test]
fn perturbations_reject_a_non_minimizer() {
    let p = ModelParams::reference(1.0, 1.0, 11.0).unwrap();
    let mut values = optimal_path_hz(&p, 1.0).unwrap().grid_function().unwrap().values().to_vec();
    values[6] += 0.5;
    let bumped = GridFunction::new(PeriodicScale::new(1.0, 11).unwrap(), values).unwrap();
    let report = perturbation_check(&p, 1.0, &bumped, 100, 9).unwrap();
    assert!(!report.all_nonnegative);
    assert!(report.min_gap < 0.0);
    assert!(el_residual(&p, 1.0, &bumped).unwrap() > 1e-3);
}

#[test]
fn a_single_exponential_solves_the_equation() {
    let p = ModelParams::reference(1.0, 1.0, 11.0).unwrap();
    let h = 0.5;
    let system = socloss::el_coefficients(&p, h).unwrap();
    let roots: &FundamentalSystem = system.roots();
    let scale = PeriodicScale::new(h, 22).unwrap();
    let e1 = GridFunction::from_fn(scale, |t| socloss::delta_exp(roots.lambda1(), t, 0.0, h).unwrap()).unwrap();
    let e2 = GridFunction::from_fn(scale, |t| socloss::delta_exp(roots.lambda2(), t, 0.0, h).unwrap()).unwrap();
    for e in [e1, e2] {
        assert!(system.residual(&e).unwrap() <= 1e-10 * e.max_abs().max(1.0));
    }
}
