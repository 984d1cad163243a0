//! Time marching of a configured case.

use serde::{Deserialize, Serialize};

use mevisc::timeint::{self, Rk3, TimeStepPolicy};

use crate::cases::{CaseConfig, InviscidScheme};
use crate::diagnostics::KeSample;
use crate::inviscid::{filter6, is_periodic, CentralFlux, WenoHll};
use crate::state::{check_physical, primitives_of, CnsState};
use crate::viscous::ViscousResidual;
use crate::{Error, Result};

pub use crate::cases::FilterPolicy;

/// Why a run stopped before `t_end`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub step: usize,
    pub t: f64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: CnsState,
    pub steps: usize,
    /// Kinetic energy after every step, starting with the initial state.
    pub ke: Vec<KeSample>,
    pub failure: Option<Failure>,
    pub filter_applications: usize,
    pub weno_fallbacks: usize,
}

impl RunOutcome {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

enum Inviscid {
    Central(CentralFlux),
    Weno(WenoHll),
}

struct Residual {
    inviscid: Inviscid,
    viscous: Option<ViscousResidual>,
}

impl Residual {
    fn eval(&mut self, q: &[f64], state: &CnsState, out: &mut [f64]) -> Result<()> {
        out.fill(0.0);
        let prim = primitives_of(q, state.grid.len());
        match &mut self.inviscid {
            Inviscid::Central(c) => c.accumulate(&prim, out)?,
            Inviscid::Weno(w) => w.accumulate(&prim, out)?,
        }
        if let Some(v) = &mut self.viscous {
            v.accumulate(&prim, &state.flow, out)?;
        }
        Ok(())
    }
}

/// Runs `cfg` from its initial condition. Blow-up, loss of positivity and
/// the step cap end the run early and are reported in
/// [`RunOutcome::failure`]; only invalid configurations are errors.
pub fn run_case(cfg: &CaseConfig) -> Result<RunOutcome> {
    let state = cfg.initial_state()?;
    run_from(cfg, state)
}

pub fn run_from(cfg: &CaseConfig, mut state: CnsState) -> Result<RunOutcome> {
    cfg.validate()?;
    let grid = state.grid;
    if cfg.inviscid == InviscidScheme::Central6 && !is_periodic(&grid) {
        return Err(Error::Config("the central inviscid path needs periodic boundaries".into()));
    }
    let viscous = cfg.viscous.map(|m| ViscousResidual::new(m, grid)).transpose()?;
    let d = match &cfg.viscous {
        Some(m) => timeint::amplification_bound(m.scheme)?,
        None => 1.0,
    };
    let mut policy = TimeStepPolicy::new(cfg.cfl, d)?;
    policy.fixed_dt = cfg.dt;
    let inviscid = match cfg.inviscid {
        InviscidScheme::Central6 => Inviscid::Central(CentralFlux::new(grid)),
        InviscidScheme::Weno5Hll => Inviscid::Weno(WenoHll::new(grid)),
    };
    let mut residual = Residual { inviscid, viscous };

    let mut rk = Rk3::new();
    let mut ke = vec![KeSample {
        t: state.t,
        ke: state.kinetic_energy(),
    }];
    let mut filter_applications = 0;
    let mut failure = None;
    let t_end = cfg.t_end;
    let tol = 1e-12 * t_end.max(1.0);
    let mut step = 0;
    let mut q = std::mem::take(&mut state.q);
    while state.t < t_end - tol {
        if cfg.max_steps.is_some_and(|m| step >= m) {
            failure = Some(Failure {
                step,
                t: state.t,
                reason: format!("step cap {step} reached"),
            });
            break;
        }
        let dt = match time_step(&q, &state, &residual, &policy) {
            Ok(dt) => dt.min(t_end - state.t),
            Err(e) => {
                failure = Some(Failure {
                    step,
                    t: state.t,
                    reason: e.to_string(),
                });
                break;
            }
        };
        let stepped = rk.step(&mut q, dt, |u, r| {
            residual
                .eval(u, &state, r)
                .map_err(|e| mevisc::Error::InvalidInput(e.to_string()))
        });
        step += 1;
        let checked = stepped
            .map_err(Error::from)
            .and_then(|_| check_physical(&q, &grid, step));
        if let Err(e) = checked {
            failure = Some(Failure {
                step,
                t: state.t + dt,
                reason: e.to_string(),
            });
            break;
        }
        state.t += dt;
        if let Some(f) = cfg.filter {
            if step % f.theta == 0 {
                filter6(&mut q, &grid, f.sigma)?;
                filter_applications += 1;
            }
        }
        state.q = q;
        ke.push(KeSample {
            t: state.t,
            ke: state.kinetic_energy(),
        });
        q = std::mem::take(&mut state.q);
    }
    state.q = q;
    let weno_fallbacks = match &residual.inviscid {
        Inviscid::Weno(w) => w.fallbacks,
        Inviscid::Central(_) => 0,
    };
    Ok(RunOutcome {
        state,
        steps: step,
        ke,
        failure,
        filter_applications,
        weno_fallbacks,
    })
}

fn time_step(q: &[f64], state: &CnsState, residual: &Residual, policy: &TimeStepPolicy) -> Result<f64> {
    if let Some(dt) = policy.fixed_dt {
        return Ok(dt);
    }
    let g = state.grid;
    let prim = primitives_of(q, g.len());
    let c = prim.sound_speed();
    let mu = match &residual.viscous {
        Some(v) => v.model().diffusivity(&prim, &state.flow),
        None => Vec::new(),
    };
    Ok(timeint::stable_dt(&[g.dx, g.dy], &[&prim.u, &prim.v], &c, &mu, policy)?)
}

/// Step cap applied to every run of a Θ scan.
pub const SCAN_STEP_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaRun {
    pub theta: usize,
    pub completed: bool,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaScan {
    /// Largest Θ in the range that reaches `t_end`; `None` if even the
    /// smallest fails.
    pub max_stable: Option<usize>,
    pub runs: Vec<ThetaRun>,
}

/// Bisection for the largest stable filter cycle in `[lo, hi]`, assuming
/// stability is monotone in Θ. Each run is capped at [`SCAN_STEP_CAP`] steps.
pub fn theta_stability_scan(cfg: &CaseConfig, lo: usize, hi: usize) -> Result<ThetaScan> {
    if lo == 0 || hi < lo {
        return Err(Error::Config(format!("invalid Θ range [{lo}, {hi}]")));
    }
    let sigma = cfg.filter.map_or(0.2, |f| f.sigma);
    let mut runs = Vec::new();
    let mut trial = |theta: usize| -> Result<bool> {
        let mut c = cfg.clone();
        c.filter = Some(FilterPolicy { theta, sigma });
        c.max_steps = Some(c.max_steps.map_or(SCAN_STEP_CAP, |m| m.min(SCAN_STEP_CAP)));
        let out = run_case(&c)?;
        runs.push(ThetaRun {
            theta,
            completed: out.completed(),
            steps: out.steps,
        });
        Ok(out.completed())
    };
    let max_stable = if trial(hi)? {
        Some(hi)
    } else if !trial(lo)? {
        None
    } else {
        let (mut good, mut bad) = (lo, hi);
        while bad - good > 1 {
            let mid = good + (bad - good) / 2;
            if trial(mid)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
        Some(good)
    };
    Ok(ThetaScan { max_stable, runs })
}
