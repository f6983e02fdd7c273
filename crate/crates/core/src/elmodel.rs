//! The social-loss variational model.
//!
//! Inflation `p`, unemployment `u` and expected inflation `π` are linked by
//! `p = -βu + π` and `π' = j(p - π)`. Substituting both into the loss
//! `λ = u² + αp²` gives a Lagrangian in `(π, π^Δ)`, which is minimized on
//! `[0, T]` with fixed endpoint values and discount rate `δ`.
//!
//! On `hZ` the Euler–Lagrange equation is
//! `Ω π^ΔΔ + A π^Δ - B π = 0` with constant coefficients, so the minimizer
//! has a closed form built from the delta exponentials of its characteristic
//! roots. `h = 0` gives the continuous model.

use serde::{Deserialize, Serialize};

use crate::dynexp::{grid_offset, pow_int, solve_second_order, FundamentalSystem, RootKind};
use crate::error::{Error, Result};
use crate::timescale::{GridFunction, PeriodicScale, MIN_STEPS};

/// `|Ω|` at or below this is treated as a vanishing leading coefficient.
pub const OMEGA_TOLERANCE: f64 = 1e-12;

/// Largest admissible distance of `T/h` from an integer.
pub const COMMENSURATE_TOLERANCE: f64 = 1e-9;

/// Smallest admissible magnitude of the boundary-system determinant.
pub const SINGULAR_DENOMINATOR: f64 = 1e-14;

/// Default absolute tolerance of [`social_loss_continuous`].
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-10;

/// Economic constants and boundary data of one minimization problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ModelParams {
    alpha: f64,
    beta: f64,
    j: f64,
    delta: f64,
    pi0: f64,
    pi_t: f64,
    horizon: f64,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
    j: f64,
    delta: f64,
    pi0: f64,
    pi_t: f64,
    horizon: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.alpha, raw.beta, raw.j, raw.delta, raw.pi0, raw.pi_t, raw.horizon)
    }
}

fn require(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if value.is_finite() && ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason })
    }
}

impl ModelParams {
    /// Inflation-distaste weight of the reference economy.
    pub const REFERENCE_ALPHA: f64 = 0.5;
    /// Phillips slope of the reference economy.
    pub const REFERENCE_BETA: f64 = 3.0;
    /// Expectation-adjustment rate of the reference economy.
    pub const REFERENCE_J: f64 = 0.75;
    /// Discount rate of the reference economy.
    pub const REFERENCE_DELTA: f64 = 0.25;

    pub fn new(
        alpha: f64,
        beta: f64,
        j: f64,
        delta: f64,
        pi0: f64,
        pi_t: f64,
        horizon: f64,
    ) -> Result<Self> {
        require("alpha", alpha, alpha > 0.0, "must be positive")?;
        require("beta", beta, beta > 0.0, "must be positive")?;
        require("j", j, j > 0.0 && j <= 1.0, "must lie in (0, 1]")?;
        require("delta", delta, delta > 0.0, "must be positive")?;
        require("pi0", pi0, true, "must be finite")?;
        require("piT", pi_t, true, "must be finite")?;
        require("T", horizon, horizon > 0.0, "must be positive")?;
        Ok(Self {
            alpha,
            beta,
            j,
            delta,
            pi0,
            pi_t,
            horizon,
        })
    }

    /// `α = 1/2, β = 3, j = 3/4, δ = 1/4` with the given boundary data.
    pub fn reference(pi0: f64, pi_t: f64, horizon: f64) -> Result<Self> {
        Self::new(
            Self::REFERENCE_ALPHA,
            Self::REFERENCE_BETA,
            Self::REFERENCE_J,
            Self::REFERENCE_DELTA,
            pi0,
            pi_t,
            horizon,
        )
    }

    /// Same economy, new boundary data.
    pub fn with_boundary(&self, pi0: f64, pi_t: f64, horizon: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.j, self.delta, pi0, pi_t, horizon)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn j(&self) -> f64 {
        self.j
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn pi0(&self) -> f64 {
        self.pi0
    }
    pub fn pi_t(&self) -> f64 {
        self.pi_t
    }
    pub fn horizon(&self) -> f64 {
        self.horizon
    }
}

/// Undiscounted loss `(v/(βj))² + α(v/j + π)²` at state `pi` and rate `v`.
pub fn lagrangian(params: &ModelParams, pi: f64, v: f64) -> f64 {
    let slack = v / (params.beta * params.j);
    let inflation = v / params.j + pi;
    slack * slack + params.alpha * inflation * inflation
}

/// Coefficients of `Ω π^ΔΔ + A π^Δ - B π = 0` and its characteristic roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElSystem {
    omega: f64,
    a_coef: f64,
    b_coef: f64,
    zeta: f64,
    roots: FundamentalSystem,
    h: f64,
}

/// Euler–Lagrange coefficients of the model on the scale with step `h`
/// (`h = 0` for the continuous model).
pub fn el_coefficients(params: &ModelParams, h: f64) -> Result<ElSystem> {
    let ab2 = params.alpha * params.beta * params.beta;
    let omega = 1.0 + ab2 - ab2 * params.j * h;
    let a_coef = -(params.delta + ab2 * params.delta + ab2 * params.j * params.j * h);
    let b_coef = ab2 * params.j * (params.delta + params.j);
    ElSystem::from_coefficients(omega, a_coef, b_coef, h)
}

impl ElSystem {
    /// Builds the system from explicit `Ω`, `A`, `B`.
    pub fn from_coefficients(omega: f64, a_coef: f64, b_coef: f64, h: f64) -> Result<Self> {
        if !omega.is_finite() || omega.abs() <= OMEGA_TOLERANCE {
            return Err(Error::DegenerateLeadingCoefficient { h });
        }
        let roots = solve_second_order(a_coef / omega, -b_coef / omega, h)?;
        Ok(Self {
            omega,
            a_coef,
            b_coef,
            zeta: (a_coef * a_coef + 4.0 * b_coef * omega) / (omega * omega),
            roots,
            h,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn a_coef(&self) -> f64 {
        self.a_coef
    }
    pub fn b_coef(&self) -> f64 {
        self.b_coef
    }
    /// `ζ = (A² + 4BΩ)/Ω²`.
    pub fn zeta(&self) -> f64 {
        self.zeta
    }
    pub fn roots(&self) -> &FundamentalSystem {
        &self.roots
    }
    pub fn h(&self) -> f64 {
        self.h
    }

    /// `φ(λ) = λ² + (A/Ω)λ - B/Ω`.
    pub fn characteristic(&self, lambda: f64) -> f64 {
        lambda * lambda + self.a_coef / self.omega * lambda - self.b_coef / self.omega
    }

    /// Largest `|Ω π^ΔΔ + A π^Δ - B π|` over `{0, ..., T - 2h}`.
    pub fn residual(&self, path: &GridFunction) -> Result<f64> {
        if (path.scale().h() - self.h).abs() > 1e-12 * self.h {
            return Err(Error::ScaleMismatch {
                h: self.h,
                horizon: path.scale().horizon(),
                path_h: path.scale().h(),
                path_horizon: path.scale().horizon(),
            });
        }
        let d1 = path.delta_derivative()?;
        let d2 = d1.delta_derivative()?;
        Ok(d2
            .values()
            .iter()
            .zip(d1.values())
            .zip(path.values())
            .map(|((&dd, &d), &y)| (self.omega * dd + self.a_coef * d - self.b_coef * y).abs())
            .fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    /// `C(1 + λ₁h)^(t/h) + (π₀ - C)(1 + λ₂h)^(t/h)`
    HzDistinct,
    /// `(1 + ph)^(t/h) (K₁ + K₂ t / (1 + ph))`
    HzDouble,
    /// `C₁ e^(r₁t) + C₂ e^(r₂t)`
    Continuous,
}

/// An evaluable optimal path. See [`PathKind`] for the three shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormPath {
    kind: PathKind,
    constants: [f64; 2],
    /// Growth factors `1 + λᵢh` on `hZ`, rates `rᵢ` in continuous time.
    bases: [f64; 2],
    h: f64,
    horizon: f64,
}

impl ClosedFormPath {
    /// Boundary-matched solution of the Euler–Lagrange equation described by
    /// `system` on `[0, horizon]`.
    pub fn from_system(system: &ElSystem, pi0: f64, pi_t: f64, horizon: f64) -> Result<Self> {
        let h = system.h();
        if h == 0.0 {
            return Self::continuous_from_roots(system.roots(), pi0, pi_t, horizon);
        }
        let steps = commensurate_steps(horizon, h)?;
        let roots = system.roots();
        match roots.kind() {
            RootKind::DistinctRoots => {
                let (g1, g2) = roots.growth_factors();
                let p1 = pow_int(g1, steps);
                let p2 = pow_int(g2, steps);
                let denominator = p1 - p2;
                if denominator.is_nan() || denominator.abs() < SINGULAR_DENOMINATOR {
                    return Err(Error::SingularBoundarySystem(format!(
                        "growth factors {g1} and {g2} coincide after {steps} steps"
                    )));
                }
                let c = (pi_t - pi0 * p2) / denominator;
                Ok(Self {
                    kind: PathKind::HzDistinct,
                    constants: [c, pi0 - c],
                    bases: [g1, g2],
                    h,
                    horizon,
                })
            }
            RootKind::DoubleRoot => {
                let g = roots.growth_factors().0;
                let k2 = g * (pi_t * pow_int(g, -steps) - pi0) / horizon;
                Ok(Self {
                    kind: PathKind::HzDouble,
                    constants: [pi0, k2],
                    bases: [g, g],
                    h,
                    horizon,
                })
            }
        }
    }

    fn continuous_from_roots(
        roots: &FundamentalSystem,
        pi0: f64,
        pi_t: f64,
        horizon: f64,
    ) -> Result<Self> {
        let (r1, r2) = (roots.lambda1(), roots.lambda2());
        if roots.kind() == RootKind::DoubleRoot {
            return Err(Error::SingularBoundarySystem(format!(
                "continuous rates coincide at {r1}"
            )));
        }
        let e1 = (r1 * horizon).exp();
        let e2 = (r2 * horizon).exp();
        let c1 = (pi_t - pi0 * e2) / (e1 - e2);
        Ok(Self::continuous(c1, r1, pi0 - c1, r2, horizon))
    }

    /// `c1 e^(r1 t) + c2 e^(r2 t)` on `[0, horizon]`.
    pub fn continuous(c1: f64, r1: f64, c2: f64, r2: f64, horizon: f64) -> Self {
        Self {
            kind: PathKind::Continuous,
            constants: [c1, c2],
            bases: [r1, r2],
            h: 0.0,
            horizon,
        }
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }
    /// `(C, π₀ - C)`, `(K₁, K₂)` or `(C₁, C₂)` depending on the kind.
    pub fn constants(&self) -> [f64; 2] {
        self.constants
    }
    /// Growth factors on `hZ`, exponential rates in continuous time.
    pub fn bases(&self) -> [f64; 2] {
        self.bases
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    fn eval_with(&self, t: f64, power: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let [c1, c2] = self.constants;
        match self.kind {
            PathKind::HzDistinct => Ok(c1 * power(self.bases[0])? + c2 * power(self.bases[1])?),
            PathKind::HzDouble => {
                let g = self.bases[0];
                Ok(power(g)? * (c1 + c2 * t / g))
            }
            PathKind::Continuous => {
                Ok(c1 * (self.bases[0] * t).exp() + c2 * (self.bases[1] * t).exp())
            }
        }
    }

    /// Value at a point of the path's own time scale.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        if self.kind == PathKind::Continuous {
            return self.eval_with(t, |_| unreachable!());
        }
        let k = grid_offset(t, self.h)?;
        self.eval_with(t, |g| Ok(pow_int(g, k)))
    }

    /// Value at any real `t`, reading `(1 + λh)^(t/h)` with a real exponent.
    ///
    /// Off-grid times need positive growth factors.
    pub fn extended_value(&self, t: f64) -> Result<f64> {
        if self.kind == PathKind::Continuous || grid_offset(t, self.h).is_ok() {
            return self.value_at(t);
        }
        let exponent = t / self.h;
        self.eval_with(t, |g| {
            if g > 0.0 {
                Ok(g.powf(exponent))
            } else {
                Err(Error::NotAGridOffset { offset: t, h: self.h })
            }
        })
    }

    /// `π'(t)` of a continuous path.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        if self.kind != PathKind::Continuous {
            return Err(Error::WrongPathKind("derivative needs a continuous path"));
        }
        let [c1, c2] = self.constants;
        let [r1, r2] = self.bases;
        Ok(c1 * r1 * (r1 * t).exp() + c2 * r2 * (r2 * t).exp())
    }

    /// Samples the path on `scale`. Discrete paths need a scale with their own step.
    pub fn sample(&self, scale: PeriodicScale) -> Result<GridFunction> {
        GridFunction::try_from_fn(scale, |t| self.value_at(t))
    }

    /// Samples a discrete path on its own grid `{0, h, ..., T}`.
    pub fn grid_function(&self) -> Result<GridFunction> {
        if self.kind == PathKind::Continuous {
            return Err(Error::WrongPathKind("continuous paths have no own grid"));
        }
        let steps = commensurate_steps(self.horizon, self.h)?;
        self.sample(PeriodicScale::new(self.h, steps as usize)?)
    }
}

/// `N = T / h`, required to be an integer of at least `MIN_STEPS`.
pub fn commensurate_steps(horizon: f64, h: f64) -> Result<i64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidScale(format!("step must be positive, got {h}")));
    }
    let ratio = horizon / h;
    let steps = ratio.round();
    if !ratio.is_finite() || (ratio - steps).abs() > COMMENSURATE_TOLERANCE {
        return Err(Error::NonCommensurateHorizon { horizon, h });
    }
    if steps < MIN_STEPS as f64 {
        return Err(Error::InvalidScale(format!(
            "horizon {horizon} holds only {steps} steps of {h}"
        )));
    }
    Ok(steps as i64)
}

/// Minimizer of the discrete functional on `hZ ∩ [0, T]`.
pub fn optimal_path_hz(params: &ModelParams, h: f64) -> Result<ClosedFormPath> {
    commensurate_steps(params.horizon, h)?;
    let system = el_coefficients(params, h)?;
    ClosedFormPath::from_system(&system, params.pi0, params.pi_t, params.horizon)
}

/// Minimizer of the continuous functional.
pub fn optimal_path_continuous(params: &ModelParams) -> Result<ClosedFormPath> {
    let system = el_coefficients(params, 0.0)?;
    let path = ClosedFormPath::from_system(&system, params.pi0, params.pi_t, params.horizon)?;
    let [r1, r2] = path.bases();
    assert!(r1 > 0.0 && r2 < 0.0, "continuous rates must have opposite signs");
    Ok(path)
}

/// `Λ_h(π) = Σ_{t=0}^{T-h} λ(π(t), π^Δ(t)) e_{⊖δ}(t, 0) h` with
/// `e_{⊖δ}(t, 0) = (1 + hδ)^(-t/h)`.
pub fn social_loss_hz(params: &ModelParams, h: f64, path: &GridFunction) -> Result<f64> {
    let scale = path.scale();
    if (scale.h() - h).abs() > 1e-12 * h
        || (scale.horizon() - params.horizon).abs() > COMMENSURATE_TOLERANCE * params.horizon
    {
        return Err(Error::ScaleMismatch {
            h,
            horizon: params.horizon,
            path_h: scale.h(),
            path_horizon: scale.horizon(),
        });
    }
    let growth = 1.0 + h * params.delta;
    let values = path.values();
    let mut total = 0.0;
    for (k, w) in values.windows(2).enumerate() {
        let rate = (w[1] - w[0]) / h;
        total += lagrangian(params, w[0], rate) * pow_int(growth, -(k as i64)) * h;
    }
    Ok(total)
}

/// `Λ_C(π) = ∫₀ᵀ λ(π(t), π'(t)) e^(-δt) dt` for a continuous path, by adaptive
/// Simpson quadrature to absolute tolerance `tol`.
pub fn social_loss_continuous(params: &ModelParams, path: &ClosedFormPath, tol: f64) -> Result<f64> {
    if path.kind() != PathKind::Continuous {
        return Err(Error::WrongPathKind("continuous loss needs a continuous path"));
    }
    let integrand = |t: f64| {
        let pi = path.value_at(t).expect("continuous paths evaluate everywhere");
        let v = path.derivative(t).expect("continuous path");
        lagrangian(params, pi, v) * (-params.delta * t).exp()
    };
    Ok(adaptive_simpson(&integrand, 0.0, path.horizon(), tol))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    const PANELS: usize = 16;
    const MAX_DEPTH: u32 = 40;

    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }

    let width = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == PANELS { b } else { lo + width };
            let (flo, fmid, fhi) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            step(f, lo, hi, flo, fmid, fhi, whole, tol / PANELS as f64, MAX_DEPTH)
        })
        .sum()
}
