//! Delta exponentials and constant-coefficient second-order dynamic equations.
//!
//! A step `h > 0` selects the periodic scale `hZ`; `h = 0` selects the real
//! line, where every formula reduces to its classical counterpart.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timescale::{GridFunction, PeriodicScale, GRID_TOLERANCE};

/// `|1 + p h|` at or below this is treated as zero.
pub const REGRESSIVITY_TOLERANCE: f64 = 1e-14;

/// Relative threshold on the discriminant below which roots are merged.
pub const DOUBLE_ROOT_TOLERANCE: f64 = 1e-12;

/// `base^n` by repeated squaring.
pub fn pow_int(base: f64, n: i64) -> f64 {
    if let Ok(small) = i32::try_from(n) {
        return base.powi(small);
    }
    let mut acc = 1.0;
    let mut sq = base;
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= sq;
        }
        sq *= sq;
        e >>= 1;
    }
    if n < 0 {
        1.0 / acc
    } else {
        acc
    }
}

fn check_step(h: f64) -> Result<()> {
    if h.is_finite() && h >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidScale(format!("step must be nonnegative, got {h}")))
    }
}

/// A constant coefficient `p` with `1 + p h != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regressive {
    p: f64,
    h: f64,
}

impl Regressive {
    pub fn new(p: f64, h: f64) -> Result<Self> {
        check_step(h)?;
        if !p.is_finite() || (1.0 + p * h).abs() <= REGRESSIVITY_TOLERANCE {
            return Err(Error::NotRegressive { p, h });
        }
        Ok(Self { p, h })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Per-step growth factor `1 + p h`.
    pub fn growth(&self) -> f64 {
        1.0 + self.p * self.h
    }

    /// `⊖p = -p / (1 + p h)`, itself regressive.
    pub fn ominus(&self) -> Self {
        Self {
            p: -self.p / self.growth(),
            h: self.h,
        }
    }

    /// `e_p(t, t0)`.
    pub fn exp(&self, t: f64, t0: f64) -> Result<f64> {
        if self.h == 0.0 {
            return Ok((self.p * (t - t0)).exp());
        }
        Ok(pow_int(self.growth(), grid_offset(t - t0, self.h)?))
    }
}

/// Number of steps in `offset`, which must be an integer multiple of `h`.
pub(crate) fn grid_offset(offset: f64, h: f64) -> Result<i64> {
    let err = Error::NotAGridOffset { offset, h };
    if !offset.is_finite() {
        return Err(err);
    }
    let n = (offset / h).round();
    if (offset - n * h).abs() > GRID_TOLERANCE * offset.abs().max(h) || n.abs() > i64::MAX as f64 {
        return Err(err);
    }
    Ok(n as i64)
}

/// `⊖p = -p / (1 + p h)`.
pub fn ominus(p: f64, h: f64) -> Result<f64> {
    Ok(Regressive::new(p, h)?.ominus().p())
}

/// The delta exponential `e_p(t, t0)`: `(1 + p h)^((t - t0)/h)` on `hZ`,
/// `exp(p (t - t0))` on the real line.
pub fn delta_exp(p: f64, t: f64, t0: f64, h: f64) -> Result<f64> {
    Regressive::new(p, h)?.exp(t, t0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootKind {
    DistinctRoots,
    DoubleRoot,
}

/// Fundamental system of `y^ΔΔ + a y^Δ + b y = 0` with real characteristic
/// roots, based at `t0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalSystem {
    kind: RootKind,
    lambda1: f64,
    lambda2: f64,
    h: f64,
    alpha: f64,
    beta: f64,
}

/// Solves the characteristic equation `λ² + a λ + b = 0` of
/// `y^ΔΔ + a y^Δ + b y = 0` on the scale with step `h`.
///
/// Returns the larger root as `lambda1`.
pub fn solve_second_order(alpha: f64, beta: f64, h: f64) -> Result<FundamentalSystem> {
    check_step(h)?;
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "coefficient",
            value: if alpha.is_finite() { beta } else { alpha },
            reason: "must be finite",
        });
    }
    if (1.0 - alpha * h + beta * h * h).abs() <= REGRESSIVITY_TOLERANCE {
        return Err(Error::NotRegressiveEquation { alpha, beta, h });
    }

    let discriminant = alpha * alpha - 4.0 * beta;
    let scale = (alpha * alpha).max(4.0 * beta.abs()).max(1.0);
    let (kind, lambda1, lambda2) = if discriminant.abs() <= DOUBLE_ROOT_TOLERANCE * scale {
        let p = -alpha / 2.0;
        (RootKind::DoubleRoot, p, p)
    } else if discriminant < 0.0 {
        return Err(Error::OscillatoryUnsupported { discriminant });
    } else {
        // Larger-magnitude root without cancellation, the other from λ₁λ₂ = b.
        let root = discriminant.sqrt();
        let big = -(alpha + alpha.signum() * root) / 2.0;
        let big = if alpha == 0.0 { root / 2.0 } else { big };
        let small = beta / big;
        (RootKind::DistinctRoots, big.max(small), big.min(small))
    };

    for lambda in [lambda1, lambda2] {
        Regressive::new(lambda, h)?;
    }
    Ok(FundamentalSystem {
        kind,
        lambda1,
        lambda2,
        h,
        alpha,
        beta,
    })
}

impl FundamentalSystem {
    pub fn kind(&self) -> RootKind {
        self.kind
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Coefficients `(a, b)` of the equation this system solves.
    pub fn coefficients(&self) -> (f64, f64) {
        (self.alpha, self.beta)
    }

    /// `φ(λ) = λ² + a λ + b`.
    pub fn characteristic(&self, lambda: f64) -> f64 {
        lambda * lambda + self.alpha * lambda + self.beta
    }

    /// Per-step growth factors `1 + λᵢ h`.
    pub fn growth_factors(&self) -> (f64, f64) {
        (1.0 + self.lambda1 * self.h, 1.0 + self.lambda2 * self.h)
    }

    fn exp(&self, lambda: f64, t: f64) -> Result<f64> {
        Regressive::new(lambda, self.h)?.exp(t, 0.0)
    }

    /// Basis solutions `(y₁(t), y₂(t))`.
    pub fn basis(&self, t: f64) -> Result<(f64, f64)> {
        match self.kind {
            RootKind::DistinctRoots => Ok((self.exp(self.lambda1, t)?, self.exp(self.lambda2, t)?)),
            RootKind::DoubleRoot => {
                let p = self.lambda1;
                let e = self.exp(p, t)?;
                // ∫₀ᵗ Δτ / (1 + p μ) = t / (1 + p h) for constant graininess.
                Ok((e, e * t / (1.0 + p * self.h)))
            }
        }
    }

    /// Delta derivatives `(y₁^Δ(t), y₂^Δ(t))` of the basis.
    pub fn basis_delta(&self, t: f64) -> Result<(f64, f64)> {
        let (y1, y2) = self.basis(t)?;
        match self.kind {
            RootKind::DistinctRoots => Ok((self.lambda1 * y1, self.lambda2 * y2)),
            RootKind::DoubleRoot => {
                let p = self.lambda1;
                Ok((p * y1, y1 * (1.0 + p * t / (1.0 + p * self.h))))
            }
        }
    }

    /// `W(y₁, y₂)(t) = y₁ y₂^Δ - y₂ y₁^Δ`.
    pub fn wronskian(&self, t: f64) -> Result<f64> {
        let (y1, y2) = self.basis(t)?;
        let (d1, d2) = self.basis_delta(t)?;
        Ok(y1 * d2 - y2 * d1)
    }
}

/// `t ↦ c₁ y₁(t) + c₂ y₂(t)` for a fundamental system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralSolution {
    pub system: FundamentalSystem,
    pub c1: f64,
    pub c2: f64,
}

/// Combines the basis of `fs` with constants `c1`, `c2`.
pub fn general_solution(fs: FundamentalSystem, c1: f64, c2: f64) -> GeneralSolution {
    GeneralSolution { system: fs, c1, c2 }
}

impl GeneralSolution {
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (y1, y2) = self.system.basis(t)?;
        Ok(self.c1 * y1 + self.c2 * y2)
    }

    pub fn sample(&self, scale: PeriodicScale) -> Result<GridFunction> {
        GridFunction::try_from_fn(scale, |t| self.eval(t))
    }
}
