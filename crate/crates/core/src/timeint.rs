//! Explicit time stepping: three-stage TVD Runge–Kutta, forward Euler, and
//! the convective/viscous time-step policy.

use serde::{Deserialize, Serialize};

use crate::spectral::{self, Symbol};
use crate::{Error, Result, SchemeId, TermKind};

/// Stepper with reusable stage buffers. Counts completed steps so that a
/// non-finite tendency can be reported with its step index.
#[derive(Debug, Default, Clone)]
pub struct Rk3 {
    u0: Vec<f64>,
    r: Vec<f64>,
    pub steps: usize,
}

impl Rk3 {
    pub fn new() -> Self {
        Self::default()
    }

    /// `U¹ = Uⁿ + Δt R(Uⁿ)`, `U² = ¾Uⁿ + ¼U¹ + ¼Δt R(U¹)`,
    /// `Uⁿ⁺¹ = ⅓Uⁿ + ⅔U² + ⅔Δt R(U²)`.
    ///
    /// On error `u` is left at an intermediate stage.
    pub fn step<F>(&mut self, u: &mut [f64], dt: f64, mut residual: F) -> Result<()>
    where
        F: FnMut(&[f64], &mut [f64]) -> Result<()>,
    {
        check_dt(dt)?;
        let n = u.len();
        self.u0.clear();
        self.u0.extend_from_slice(u);
        self.r.resize(n, 0.0);

        self.eval(u, &mut residual)?;
        for (x, r) in u.iter_mut().zip(&self.r) {
            *x += dt * r;
        }
        self.eval(u, &mut residual)?;
        for ((x, x0), r) in u.iter_mut().zip(&self.u0).zip(&self.r) {
            *x = 0.75 * x0 + 0.25 * *x + 0.25 * dt * r;
        }
        self.eval(u, &mut residual)?;
        for ((x, x0), r) in u.iter_mut().zip(&self.u0).zip(&self.r) {
            *x = x0 / 3.0 + 2.0 / 3.0 * *x + 2.0 / 3.0 * dt * r;
        }
        self.steps += 1;
        Ok(())
    }

    fn eval<F>(&mut self, u: &[f64], residual: &mut F) -> Result<()>
    where
        F: FnMut(&[f64], &mut [f64]) -> Result<()>,
    {
        residual(u, &mut self.r)?;
        if self.r.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite { step: self.steps })
        }
    }
}

/// One RK3 step with freshly allocated buffers.
pub fn rk3_step<F>(u: &mut [f64], dt: f64, residual: F) -> Result<()>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    Rk3::new().step(u, dt, residual)
}

/// `Uⁿ⁺¹ = Uⁿ + Δt R(Uⁿ)`.
pub fn euler_step<F>(u: &mut [f64], dt: f64, mut residual: F) -> Result<()>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    check_dt(dt)?;
    let mut r = vec![0.0; u.len()];
    residual(u, &mut r)?;
    if !r.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite { step: 0 });
    }
    for (x, r) in u.iter_mut().zip(&r) {
        *x += dt * r;
    }
    Ok(())
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("time step must be positive, got {dt}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeStepPolicy {
    pub cfl: f64,
    /// Viscous bound constant `D` in `Δt ≤ Δx²/(D μ)`.
    pub d: f64,
    pub fixed_dt: Option<f64>,
}

impl TimeStepPolicy {
    pub fn new(cfl: f64, d: f64) -> Result<Self> {
        if !(cfl > 0.0 && d > 0.0) {
            return Err(Error::InvalidInput(format!("need CFL > 0 and D > 0, got {cfl}, {d}")));
        }
        Ok(Self {
            cfl,
            d,
            fixed_dt: None,
        })
    }

    /// CFL 0.5 with `D` computed from the scheme's symbol.
    pub fn for_scheme(scheme: SchemeId) -> Result<Self> {
        Self::new(0.5, amplification_bound(scheme)?)
    }
}

/// `Δt = CFL · min( min_cells min_d h_d/(|u_d|+c), min_cells min_d h_d²/(D μ) )`.
///
/// `velocities[d]` and `sound` are per-cell (may be empty for a purely
/// viscous problem); `mu` is the effective diffusivity per cell (may be
/// empty for a purely convective one).
pub fn stable_dt(
    spacings: &[f64],
    velocities: &[&[f64]],
    sound: &[f64],
    mu: &[f64],
    policy: &TimeStepPolicy,
) -> Result<f64> {
    if spacings.is_empty() || spacings.iter().any(|h| h.is_nan() || *h <= 0.0) {
        return Err(Error::InvalidInput("grid spacings must be positive".into()));
    }
    if let Some(dt) = policy.fixed_dt {
        check_dt(dt)?;
        return Ok(dt);
    }
    if !velocities.is_empty() && velocities.len() != spacings.len() {
        return Err(Error::Shape("one velocity component per direction".into()));
    }
    let mut conv = f64::INFINITY;
    let cells = sound.len().max(velocities.first().map_or(0, |v| v.len()));
    for i in 0..cells {
        let c = sound.get(i).copied().unwrap_or(0.0);
        for (d, h) in spacings.iter().enumerate() {
            let u = velocities.get(d).and_then(|v| v.get(i)).copied().unwrap_or(0.0);
            let s = u.abs() + c;
            if s > 0.0 {
                conv = conv.min(h / s);
            }
        }
    }
    let mu_max = mu.iter().fold(0.0_f64, |a, m| a.max(*m));
    let hmin = spacings.iter().fold(f64::INFINITY, |a, h| a.min(*h));
    let visc = if mu_max > 0.0 {
        hmin * hmin / (policy.d * mu_max)
    } else {
        f64::INFINITY
    };
    let dt = policy.cfl * conv.min(visc);
    if dt.is_finite() {
        Ok(dt)
    } else {
        Err(Error::InvalidInput("no convective or viscous scale to bound the step".into()))
    }
}

/// `D = max_k |symbol(k)| / 2` of a straight scheme over the default scan;
/// forward Euler on `∂t φ = μ ∂xxφ` is stable for `Δt ≤ Δx²/(D μ)`.
pub fn amplification_bound(scheme: SchemeId) -> Result<f64> {
    Ok(amplification_bound_at(scheme)?.1)
}

/// `(k_max, D)` including the maximizing wavenumber.
pub fn amplification_bound_at(scheme: SchemeId) -> Result<(f64, f64)> {
    if scheme.term() != TermKind::Straight {
        return Err(Error::InvalidScheme(format!("{scheme} is not a straight scheme")));
    }
    Ok(Symbol::new(scheme)?.amplification_bound(spectral::DEFAULT_SAMPLES + 1))
}
