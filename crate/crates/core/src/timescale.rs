//! Periodic time scales `[0, T] ∩ hZ` and delta calculus on sampled paths.
//!
//! Only the isolated grid `{0, h, 2h, ..., Nh}` is represented. On it the
//! forward jump is `t + h`, the graininess is the constant `h` (except at the
//! right endpoint, where it is clamped to zero) and the delta derivative is
//! the forward difference quotient.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest number of steps a model scale may have.
pub const MIN_STEPS: usize = 3;

/// Relative tolerance used to decide whether a time lies on the grid.
pub const GRID_TOLERANCE: f64 = 1e-12;

/// The time scale `{k h : k = 0..=N}`. The horizon `T = N h` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicScale {
    h: f64,
    steps: usize,
}

/// Jump operators and graininess functions evaluated at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpOperators {
    pub sigma: f64,
    pub rho: f64,
    pub mu: f64,
    pub nu: f64,
}

impl PeriodicScale {
    /// Scale with step `h > 0` and `steps >= 3` intervals.
    pub fn new(h: f64, steps: usize) -> Result<Self> {
        if steps < MIN_STEPS {
            return Err(Error::InvalidScale(format!(
                "need at least {MIN_STEPS} steps, got {steps}"
            )));
        }
        Self::reduced(h, steps)
    }

    /// Scale of `steps` intervals covering `[0, horizon]`, so `h = horizon / steps`.
    pub fn from_horizon(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidScale(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        Self::new(horizon / steps as f64, steps)
    }

    // Domains of derivatives (`[0,T]^κ`) may have fewer than MIN_STEPS steps.
    fn reduced(h: f64, steps: usize) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidScale(format!("step must be positive, got {h}")));
        }
        Ok(Self { h, steps })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of intervals `N`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of grid points, `N + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `T = N h`.
    pub fn horizon(&self) -> f64 {
        self.steps as f64 * self.h
    }

    /// The grid point `t_k = k h`.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.h
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |k| self.time(k))
    }

    /// `[0, T]^κ`: the scale with its right endpoint removed.
    pub fn kappa(&self) -> Result<Self> {
        if self.steps == 0 {
            return Err(Error::InvalidScale(
                "a single-point scale has no reduced domain".into(),
            ));
        }
        Self::reduced(self.h, self.steps - 1)
    }

    /// Index `k` with `t = k h`, accepting decimal steps that are not
    /// binary-exact.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let not_grid = Error::NotAGridPoint { t, h: self.h };
        if !t.is_finite() {
            return Err(not_grid);
        }
        let k = (t / self.h).round();
        if k < 0.0 || k > self.steps as f64 {
            return Err(not_grid);
        }
        if (t - k * self.h).abs() > GRID_TOLERANCE * t.abs().max(self.h) {
            return Err(not_grid);
        }
        Ok(k as usize)
    }

    /// `σ`, `ρ`, `μ` and `ν` at the grid point `t`, clamped at `0` and `T`.
    pub fn jump_operators(&self, t: f64) -> Result<JumpOperators> {
        let k = self.index_of(t)?;
        let sigma = if k < self.steps { self.time(k + 1) } else { self.horizon() };
        let rho = if k > 0 { self.time(k - 1) } else { 0.0 };
        let here = self.time(k);
        Ok(JumpOperators {
            sigma,
            rho,
            mu: sigma - here,
            nu: here - rho,
        })
    }
}

/// A real path sampled at every point of a [`PeriodicScale`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    scale: PeriodicScale,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(scale: PeriodicScale, values: Vec<f64>) -> Result<Self> {
        if values.len() != scale.len() {
            return Err(Error::LengthMismatch {
                expected: scale.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { scale, values })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(scale: PeriodicScale, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = scale.times().map(f).collect();
        Self::new(scale, values)
    }

    /// Like [`GridFunction::from_fn`] for fallible samplers.
    pub fn try_from_fn(scale: PeriodicScale, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let values = scale.times().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(scale, values)
    }

    pub fn scale(&self) -> &PeriodicScale {
        &self.scale
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at the grid time `t`.
    pub fn at(&self, t: f64) -> Result<f64> {
        Ok(self.values[self.scale.index_of(t)?])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `f^σ`, i.e. `f(σ(t))` at every grid point.
    pub fn shifted(&self) -> Self {
        let mut values = self.values[1..].to_vec();
        values.push(*self.values.last().expect("scale has at least one point"));
        Self {
            scale: self.scale,
            values,
        }
    }

    /// Forward difference quotient on `[0, T]^κ`, one point shorter than `self`.
    pub fn delta_derivative(&self) -> Result<Self> {
        let scale = self.scale.kappa()?;
        let h = self.scale.h();
        let values = self.values.windows(2).map(|w| (w[1] - w[0]) / h).collect();
        Ok(Self { scale, values })
    }

    /// `∫_a^b f(t) Δt`, a left Riemann sum scaled by `h`.
    pub fn delta_integral(&self, a: f64, b: f64) -> Result<f64> {
        let ka = self.scale.index_of(a)?;
        let kb = self.scale.index_of(b)?;
        let sum = |lo: usize, hi: usize| self.values[lo..hi].iter().sum::<f64>() * self.scale.h();
        Ok(match ka.cmp(&kb) {
            std::cmp::Ordering::Less => sum(ka, kb),
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => -sum(kb, ka),
        })
    }

    /// Pointwise combination with another function on the same scale.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.scale != other.scale {
            return Err(Error::ScaleMismatch {
                h: self.scale.h(),
                horizon: self.scale.horizon(),
                path_h: other.scale.h(),
                path_horizon: other.scale.horizon(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.scale, values)
    }

    /// Restriction to the first `len` grid points.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(Error::InvalidScale(format!(
                "cannot truncate {} points to {len}",
                self.len()
            )));
        }
        let scale = PeriodicScale::reduced(self.scale.h(), len - 1)?;
        Ok(Self {
            scale,
            values: self.values[..len].to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scale(h: f64, n: usize) -> PeriodicScale {
        PeriodicScale::new(h, n).unwrap()
    }

    #[test]
    fn jumps_on_integers() {
        let s = scale(1.0, 12);
        let j = s.jump_operators(3.0).unwrap();
        assert_eq!((j.sigma, j.rho, j.mu, j.nu), (4.0, 2.0, 1.0, 1.0));
    }

    #[test]
    fn jumps_clamp_at_endpoints() {
        let s = scale(0.25, 12);
        let j = s.jump_operators(3.0).unwrap();
        assert_eq!(j.sigma, 3.0);
        assert_eq!(j.mu, 0.0);

        let s = scale(1.0, 12);
        let j = s.jump_operators(0.0).unwrap();
        assert_eq!(j.rho, 0.0);
        assert_eq!(j.nu, 0.0);
    }

    #[test]
    fn decimal_steps_are_grid_points() {
        let s = scale(0.11, 100);
        assert_eq!(s.index_of(0.33).unwrap(), 3);
        assert_eq!(s.index_of(11.0).unwrap(), 100);
        let s = scale(0.22, 50);
        assert_eq!(s.index_of(0.66).unwrap(), 3);
    }

    #[test]
    fn off_grid_times_are_rejected() {
        let s = scale(1.0, 12);
        for t in [0.5, -1.0, 13.0, f64::NAN] {
            assert!(matches!(s.index_of(t), Err(Error::NotAGridPoint { .. })), "{t}");
        }
        assert!(s.jump_operators(2.5).is_err());
    }

    #[test]
    fn scale_validation() {
        assert!(PeriodicScale::new(0.0, 5).is_err());
        assert!(PeriodicScale::new(-1.0, 5).is_err());
        assert!(PeriodicScale::new(1.0, 2).is_err());
        assert_eq!(PeriodicScale::from_horizon(11.0, 50).unwrap().horizon(), 11.0);
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let f = GridFunction::from_fn(scale(0.3, 7), |_| 4.2).unwrap();
        assert!(f.delta_derivative().unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn derivative_examples() {
        let f = GridFunction::new(scale(1.0, 3), vec![0.0, 1.0, 4.0, 9.0]).unwrap();
        let g = f.delta_derivative().unwrap();
        assert_eq!(g.values(), &[1.0, 3.0, 5.0]);
        assert_eq!(g.scale().steps(), 2);

        let f = GridFunction::new(scale(0.5, 4), vec![1.0, 2.0, 4.0, 8.0, 16.0]).unwrap();
        assert_eq!(f.delta_derivative().unwrap().values(), &[2.0, 4.0, 8.0, 16.0]);
    }

    #[test]
    fn integral_examples() {
        let s = scale(0.25, 12);
        let one = GridFunction::from_fn(s, |_| 1.0).unwrap();
        assert!((one.delta_integral(0.0, 3.0).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(one.delta_integral(1.5, 1.5).unwrap(), 0.0);

        let f = GridFunction::from_fn(s, |t| t * t - 1.0).unwrap();
        for k in 0..12 {
            let t = s.time(k);
            let sigma = s.jump_operators(t).unwrap().sigma;
            let got = f.delta_integral(t, sigma).unwrap();
            assert!((got - 0.25 * f.values()[k]).abs() < 1e-15);
        }
        let ab = f.delta_integral(0.5, 2.0).unwrap();
        let ba = f.delta_integral(2.0, 0.5).unwrap();
        assert_eq!(ab, -ba);
    }

    #[test]
    fn grid_function_validation() {
        let s = scale(1.0, 3);
        assert!(matches!(
            GridFunction::new(s, vec![0.0; 3]),
            Err(Error::LengthMismatch { expected: 4, got: 3 })
        ));
        assert!(matches!(
            GridFunction::new(s, vec![0.0, f64::INFINITY, 0.0, 0.0]),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn repeated_derivatives_shrink_the_domain() {
        let f = GridFunction::from_fn(scale(1.0, 3), |t| t).unwrap();
        let d1 = f.delta_derivative().unwrap();
        let d2 = d1.delta_derivative().unwrap();
        let d3 = d2.delta_derivative().unwrap();
        assert_eq!(d3.len(), 1);
        assert!(d3.delta_derivative().is_err());
    }
}
