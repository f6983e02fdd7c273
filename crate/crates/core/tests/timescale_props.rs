use proptest::prelude::*;
use socloss::{GridFunction, PeriodicScale};

fn rel_close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale.max(1e-300)
}

fn grid_pair() -> impl Strategy<Value = (PeriodicScale, Vec<f64>, Vec<f64>)> {
    (3usize..60, 0.01f64..2.0).prop_flat_map(|(n, h)| {
        let scale = PeriodicScale::new(h, n).unwrap();
        (
            Just(scale),
            prop::collection::vec(-10.0f64..10.0, n + 1),
            prop::collection::vec(-10.0f64..10.0, n + 1),
        )
    })
}

proptest! {
    #[test]
    fn integral_is_linear((scale, f, g) in grid_pair(), c in -5.0f64..5.0) {
        let f = GridFunction::new(scale, f).unwrap();
        let g = GridFunction::new(scale, g).unwrap();
        let combo = f.zip_with(&g, |a, b| c * a + b).unwrap();
        let t = scale.horizon();
        let lhs = combo.delta_integral(0.0, t).unwrap();
        let rhs = c * f.delta_integral(0.0, t).unwrap() + g.delta_integral(0.0, t).unwrap();
        let size: f64 = combo.values().iter().map(|v| v.abs()).sum::<f64>() * scale.h()
            + (c.abs() + 1.0) * 10.0 * t;
        prop_assert!(rel_close(lhs, rhs, size, 1e-12));
    }

    #[test]
    fn integral_is_additive((scale, f, _g) in grid_pair(), split in 0.0f64..1.0) {
        let f = GridFunction::new(scale, f).unwrap();
        let c = scale.time((split * scale.steps() as f64) as usize);
        let t = scale.horizon();
        let whole = f.delta_integral(0.0, t).unwrap();
        let parts = f.delta_integral(0.0, c).unwrap() + f.delta_integral(c, t).unwrap();
        let size: f64 = f.values().iter().map(|v| v.abs()).sum::<f64>() * scale.h();
        prop_assert!(rel_close(whole, parts, size, 1e-12));
    }

    #[test]
    fn fundamental_relation((scale, f, _g) in grid_pair()) {
        // f^σ = f + μ f^Δ on [0, T)
        let f = GridFunction::new(scale, f).unwrap();
        let shifted = f.shifted();
        let d = f.delta_derivative().unwrap();
        for k in 0..scale.steps() {
            let mu = scale.jump_operators(scale.time(k)).unwrap().mu;
            let rhs = f.values()[k] + mu * d.values()[k];
            let size = f.values()[k].abs().max(shifted.values()[k].abs()).max(1.0);
            prop_assert!(rel_close(shifted.values()[k], rhs, size, 1e-12));
        }
    }

    #[test]
    fn summation_by_parts((scale, f, g) in grid_pair()) {
        // ∫ f g^Δ = [f g]₀ᵀ - ∫ f^Δ g^σ
        let f = GridFunction::new(scale, f).unwrap();
        let g = GridFunction::new(scale, g).unwrap();
        let n = scale.steps();
        let h = scale.h();
        let gd = g.delta_derivative().unwrap();
        let fd = f.delta_derivative().unwrap();
        let gs = g.shifted();
        let lhs: f64 = (0..n).map(|k| f.values()[k] * gd.values()[k]).sum::<f64>() * h;
        let boundary = f.values()[n] * g.values()[n] - f.values()[0] * g.values()[0];
        let rhs = boundary - (0..n).map(|k| fd.values()[k] * gs.values()[k]).sum::<f64>() * h;
        let size: f64 = (0..n).map(|k| (f.values()[k] * gd.values()[k]).abs()).sum::<f64>() * h
            + boundary.abs() + 100.0;
        prop_assert!(rel_close(lhs, rhs, size, 1e-10));
    }

    #[test]
    fn nonnegative_integrand((scale, f, _g) in grid_pair(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let f = GridFunction::new(scale, f.iter().map(|v| v.abs()).collect()).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let n = scale.steps() as f64;
        let ta = scale.time((lo * n) as usize);
        let tb = scale.time((hi * n) as usize);
        prop_assert!(f.delta_integral(ta, tb).unwrap() >= 0.0);
    }

    #[test]
    fn decimal_times_are_grid_points(n in 3usize..500, cents in prop::sample::select(vec![10usize, 11, 20, 22, 25, 70])) {
        let scale = PeriodicScale::new(cents as f64 / 100.0, n).unwrap();
        for k in 0..=n {
            let t = (k * cents) as f64 / 100.0;
            prop_assert_eq!(scale.index_of(t).unwrap(), k);
        }
    }
}
