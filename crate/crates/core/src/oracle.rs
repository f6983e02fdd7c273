//! Independent verification of the closed-form minimizer.
//!
//! The discrete functional is a convex quadratic in the interior values
//! `π(h), ..., π(T - h)`. Its stationarity system is tridiagonal and is
//! solved directly, without reference to characteristic roots.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynexp::pow_int;
use crate::elmodel::{
    commensurate_steps, el_coefficients, optimal_path_hz, social_loss_hz, ModelParams,
};
use crate::error::{Error, Result};
use crate::timescale::{GridFunction, PeriodicScale};

/// Magnitudes `ε` applied to every perturbation direction.
pub const PERTURBATION_MAGNITUDES: [f64; 4] = [1e-3, -1e-3, 1e-1, -1e-1];

/// Gaps at or above this count as nonnegative.
pub const GAP_TOLERANCE: f64 = -1e-12;

/// `∂Λ_h/∂π(t_k) = 0` for the interior grid points, as a symmetric
/// tridiagonal system `K x = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaritySystem {
    scale: PeriodicScale,
    diag: Vec<f64>,
    /// Off-diagonal; `off[i]` couples unknowns `i` and `i + 1`.
    off: Vec<f64>,
    rhs: Vec<f64>,
    boundary: (f64, f64),
}

/// Solution of a [`StationaritySystem`] with the pivots of its factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution {
    pub path: GridFunction,
    pub pivots: Vec<f64>,
}

impl StationaritySystem {
    pub fn assemble(params: &ModelParams, h: f64) -> Result<Self> {
        let steps = commensurate_steps(params.horizon(), h)? as usize;
        let scale = PeriodicScale::new(h, steps)?;

        // Term k of Λ_h is the quadratic form [π_k π_{k+1}] M_k [π_k π_{k+1}]ᵀ.
        let c = 1.0 / (params.beta() * params.j()).powi(2) / (h * h);
        let s = 1.0 / (h * params.j());
        let r = 1.0 - s;
        let alpha = params.alpha();
        let growth = 1.0 + h * params.delta();
        let terms: Vec<[f64; 3]> = (0..steps)
            .map(|k| {
                let weight = h * pow_int(growth, -(k as i64));
                [
                    weight * (c + alpha * r * r),
                    weight * (c + alpha * s * s),
                    weight * (-c + alpha * r * s),
                ]
            })
            .collect();

        let unknowns = steps - 1;
        let diag = (1..steps).map(|i| terms[i][0] + terms[i - 1][1]).collect();
        let off = (1..unknowns).map(|i| terms[i][2]).collect();
        let mut rhs = vec![0.0; unknowns];
        rhs[0] -= terms[0][2] * params.pi0();
        rhs[unknowns - 1] -= terms[steps - 1][2] * params.pi_t();
        Ok(Self {
            scale,
            diag,
            off,
            rhs,
            boundary: (params.pi0(), params.pi_t()),
        })
    }

    pub fn scale(&self) -> &PeriodicScale {
        &self.scale
    }

    /// Number of interior unknowns, `N - 1`.
    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diag(&self) -> &[f64] {
        &self.off
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Thomas elimination. Every pivot must be positive, which certifies
    /// that the system matrix is positive definite.
    pub fn solve(&self) -> Result<QpSolution> {
        let n = self.dimension();
        let mut pivots = Vec::with_capacity(n);
        let mut forward = Vec::with_capacity(n);
        for i in 0..n {
            let (pivot, value) = if i == 0 {
                (self.diag[0], self.rhs[0])
            } else {
                let m = self.off[i - 1] / pivots[i - 1];
                (
                    self.diag[i] - m * self.off[i - 1],
                    self.rhs[i] - m * forward[i - 1],
                )
            };
            if pivot.is_nan() || pivot <= 0.0 {
                return Err(Error::SingularSystem { index: i, pivot });
            }
            pivots.push(pivot);
            forward.push(value);
        }

        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let coupled = if i + 1 < n { self.off[i] * x[i + 1] } else { 0.0 };
            x[i] = (forward[i] - coupled) / pivots[i];
        }

        let mut values = Vec::with_capacity(n + 2);
        values.push(self.boundary.0);
        values.extend(x);
        values.push(self.boundary.1);
        Ok(QpSolution {
            path: GridFunction::new(self.scale, values)?,
            pivots,
        })
    }
}

/// Global minimizer of `Λ_h` with the boundary data of `params`.
pub fn qp_minimize(params: &ModelParams, h: f64) -> Result<GridFunction> {
    Ok(StationaritySystem::assemble(params, h)?.solve()?.path)
}

/// Largest Euler–Lagrange residual `|Ω π^ΔΔ + A π^Δ - B π|` over `{0, ..., T - 2h}`.
pub fn el_residual(params: &ModelParams, h: f64, path: &GridFunction) -> Result<f64> {
    let scale = path.scale();
    if (scale.horizon() - params.horizon()).abs() > 1e-9 * params.horizon() {
        return Err(Error::ScaleMismatch {
            h,
            horizon: params.horizon(),
            path_h: scale.h(),
            path_horizon: scale.horizon(),
        });
    }
    el_coefficients(params, h)?.residual(path)
}

/// Outcome of [`perturbation_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    /// Smallest `Λ_h(π + εη) - Λ_h(π)`; `+∞` when no direction was drawn.
    pub min_gap: f64,
    pub all_nonnegative: bool,
}

/// Probes `Λ_h` around `path` along `samples` random boundary-vanishing
/// directions, each scaled by every entry of [`PERTURBATION_MAGNITUDES`].
pub fn perturbation_check(
    params: &ModelParams,
    h: f64,
    path: &GridFunction,
    samples: usize,
    seed: u64,
) -> Result<PerturbationReport> {
    let base = social_loss_hz(params, h, path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = path.len() - 1;
    let mut min_gap = f64::INFINITY;
    for _ in 0..samples {
        let direction: Vec<f64> = (0..path.len())
            .map(|k| {
                let x = rng.gen_range(-1.0..=1.0);
                if k == 0 || k == last {
                    0.0
                } else {
                    x
                }
            })
            .collect();
        for eps in PERTURBATION_MAGNITUDES {
            let moved: Vec<f64> = path
                .values()
                .iter()
                .zip(&direction)
                .map(|(&p, &d)| p + eps * d)
                .collect();
            let moved = GridFunction::new(*path.scale(), moved)?;
            min_gap = min_gap.min(social_loss_hz(params, h, &moved)? - base);
        }
    }
    Ok(PerturbationReport {
        min_gap,
        all_nonnegative: min_gap >= GAP_TOLERANCE,
    })
}

/// A randomly drawn problem: parameters plus a commensurate step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub params: ModelParams,
    pub steps: usize,
    pub h: f64,
}

/// Draws a valid instance with `N ∈ [3, max_steps]`, `h = T/N` and `Ω ≥ 1/2`.
pub fn random_instance<R: Rng>(rng: &mut R, max_steps: usize) -> Instance {
    loop {
        let alpha = rng.gen_range(0.1..=2.0);
        let beta = rng.gen_range(0.5..=4.0);
        let j = rng.gen_range(0.1..=1.0);
        let delta = rng.gen_range(0.01..=0.5);
        let pi0 = rng.gen_range(0.5..=20.0);
        let pi_t = rng.gen_range(0.5..=20.0);
        let horizon = rng.gen_range(5.0..=15.0);
        let steps = rng.gen_range(3..=max_steps.max(3));
        let h = horizon / steps as f64;
        let ab2: f64 = alpha * beta * beta;
        if 1.0 + ab2 - ab2 * j * h < 0.5 {
            continue;
        }
        let params = ModelParams::new(alpha, beta, j, delta, pi0, pi_t, horizon)
            .expect("sampled parameters are valid");
        return Instance { params, steps, h };
    }
}

/// Agreement between the closed form and the tridiagonal minimizer on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    /// `max_k |qp_k - π̂(t_k)| / (1 + max|π̂|)`.
    pub deviation: f64,
    /// Closed-form residual divided by `max(1, max|π̂|)`.
    pub residual: f64,
    /// Relative difference of the two objective values.
    pub objective_gap: f64,
    pub positive_pivots: bool,
}

pub fn cross_check(instance: &Instance) -> Result<CrossCheck> {
    let Instance { params, h, .. } = *instance;
    let closed = optimal_path_hz(&params, h)?.grid_function()?;
    let qp = StationaritySystem::assemble(&params, h)?.solve()?;
    let scale = 1.0 + closed.max_abs();
    let deviation = closed
        .values()
        .iter()
        .zip(qp.path.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale;
    let residual = el_residual(&params, h, &closed)? / closed.max_abs().max(1.0);
    let lc = social_loss_hz(&params, h, &closed)?;
    let lq = social_loss_hz(&params, h, &qp.path)?;
    Ok(CrossCheck {
        deviation,
        residual,
        objective_gap: (lc - lq).abs() / lc.abs().max(lq.abs()).max(f64::MIN_POSITIVE),
        positive_pivots: qp.pivots.iter().all(|&p| p > 0.0),
    })
}

/// Worst-case figures over a seeded batch of [`cross_check`]s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub instances: usize,
    pub max_deviation: f64,
    pub max_residual: f64,
    pub max_objective_gap: f64,
    pub all_pivots_positive: bool,
}

pub fn validate(seed: u64, instances: usize, max_steps: usize) -> Result<ValidationSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = ValidationSummary {
        instances,
        max_deviation: 0.0,
        max_residual: 0.0,
        max_objective_gap: 0.0,
        all_pivots_positive: true,
    };
    for _ in 0..instances {
        let check = cross_check(&random_instance(&mut rng, max_steps))?;
        summary.max_deviation = summary.max_deviation.max(check.deviation);
        summary.max_residual = summary.max_residual.max(check.residual);
        summary.max_objective_gap = summary.max_objective_gap.max(check.objective_gap);
        summary.all_pivots_positive &= check.positive_pivots;
    }
    Ok(summary)
}
