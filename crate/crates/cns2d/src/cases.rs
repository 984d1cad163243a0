//! Benchmark configurations and their initial conditions.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use mevisc::operators::FillPolicy;
use mevisc::SchemeId;

use crate::state::{CnsState, FlowParams, Grid, GAMMA};
use crate::viscous::ViscousModel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    /// Doubly periodic shear layer.
    Dpsl,
    /// Kelvin–Helmholtz instability.
    Khi,
    /// Grid-aligned Mach-6 shock (odd-even decoupling test).
    Quirk,
}

impl std::str::FromStr for CaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dpsl" => Ok(Self::Dpsl),
            "khi" => Ok(Self::Khi),
            "quirk" => Ok(Self::Quirk),
            other => Err(Error::Config(format!("unknown case '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InviscidScheme {
    /// Nodal fluxes with the 7-point central derivative.
    Central6,
    /// Primitive WENO5-JS reconstruction with the HLL flux.
    Weno5Hll,
}

/// Explicit 6th-order filter applied to the conserved variables after every
/// `theta` steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterPolicy {
    pub theta: usize,
    pub sigma: f64,
}

impl FilterPolicy {
    pub fn new(theta: usize) -> Result<Self> {
        let f = Self { theta, sigma: 0.2 };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta == 0 {
            return Err(Error::Config("filter cycle must be at least 1".into()));
        }
        if !(self.sigma > 0.0 && self.sigma <= 1.0) {
            return Err(Error::Config(format!("filter strength {} outside (0, 1]", self.sigma)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub case: CaseKind,
    pub nx: usize,
    pub ny: usize,
    pub re: f64,
    pub mach: f64,
    pub pr: f64,
    pub cfl: f64,
    /// Fixed step; `None` uses the CFL/viscous bound every step.
    pub dt: Option<f64>,
    pub t_end: f64,
    /// Abort (recorded as a failure) once this many steps are taken.
    pub max_steps: Option<usize>,
    /// `None` runs the inviscid equations.
    pub viscous: Option<ViscousModel>,
    pub inviscid: InviscidScheme,
    pub filter: Option<FilterPolicy>,
    /// DPSL: shear-layer steepness; KHI: Gaussian width σ of the `v` bump.
    pub shear: f64,
    /// DPSL: transverse velocity amplitude; Quirk: centerline perturbation.
    pub perturbation: f64,
    /// Quirk only.
    pub shock_mach: f64,
}

impl CaseConfig {
    pub fn default_for(case: CaseKind) -> Self {
        let me4_opti: SchemeId = "me4-opti".parse().expect("known scheme");
        let base = Self {
            case,
            nx: 128,
            ny: 128,
            re: 1e4,
            mach: 0.1,
            pr: 0.72,
            cfl: 0.5,
            dt: None,
            t_end: 1.0,
            max_steps: None,
            viscous: Some(ViscousModel::new(me4_opti)),
            inviscid: InviscidScheme::Central6,
            filter: Some(FilterPolicy { theta: 190, sigma: 0.2 }),
            shear: 80.0,
            perturbation: 0.05,
            shock_mach: 0.0,
        };
        match case {
            CaseKind::Dpsl => base,
            CaseKind::Khi => Self {
                nx: 256,
                ny: 256,
                re: 200.0,
                dt: Some(1.5e-4),
                filter: Some(FilterPolicy { theta: 450, sigma: 0.2 }),
                shear: 0.05 / 2f64.sqrt(),
                perturbation: 0.1,
                ..base
            },
            CaseKind::Quirk => Self {
                nx: 800,
                ny: 20,
                re: 1000.0,
                mach: 1.0,
                t_end: 50.0,
                inviscid: InviscidScheme::Weno5Hll,
                filter: None,
                shear: 0.0,
                perturbation: 1e-6,
                shock_mach: 6.0,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{what} must be positive, got {v}")))
            }
        };
        pos(self.re, "Re")?;
        pos(self.mach, "Mach")?;
        pos(self.pr, "Pr")?;
        pos(self.cfl, "CFL")?;
        if let Some(dt) = self.dt {
            pos(dt, "dt")?;
        }
        if self.t_end.is_nan() || self.t_end < 0.0 {
            return Err(Error::Config(format!("end time {} is negative", self.t_end)));
        }
        if self.nx < 8 || self.ny < 8 {
            return Err(Error::Config(format!("grid {}x{} too small", self.nx, self.ny)));
        }
        if let Some(f) = &self.filter {
            f.validate()?;
        }
        if self.case == CaseKind::Quirk {
            pos(self.shock_mach - 1.0, "shock Mach − 1")?;
        }
        if self.inviscid == InviscidScheme::Central6 && self.case == CaseKind::Quirk {
            return Err(Error::Config("the shock case needs the WENO5/HLL inviscid path".into()));
        }
        Ok(())
    }

    pub fn flow(&self) -> FlowParams {
        FlowParams {
            re: self.re,
            mach: self.mach,
            pr: self.pr,
        }
    }

    pub fn grid(&self) -> Grid {
        match self.case {
            CaseKind::Dpsl | CaseKind::Khi => Grid::periodic_unit(self.nx, self.ny),
            CaseKind::Quirk => Grid {
                nx: self.nx,
                ny: self.ny,
                dx: 1.0,
                dy: 1.0,
                x0: 0.5,
                y0: 0.0,
                fill: [FillPolicy::Extrapolate { degree: 0 }, FillPolicy::Periodic],
            },
        }
    }

    pub fn initial_state(&self) -> Result<CnsState> {
        self.validate()?;
        let grid = self.grid();
        let flow = self.flow();
        Ok(match self.case {
            CaseKind::Dpsl => {
                let (rs, delta) = (self.shear, self.perturbation);
                let p = 1.0 / (GAMMA * self.mach * self.mach);
                CnsState::from_primitive(grid, flow, |x, y| {
                    let u = if y <= 0.5 {
                        (rs * (y - 0.25)).tanh()
                    } else {
                        (rs * (0.75 - y)).tanh()
                    };
                    [1.0, u, delta * (2.0 * PI * x).sin(), p]
                })
            }
            CaseKind::Khi => {
                let (s, a) = (self.shear, self.perturbation);
                CnsState::from_primitive(grid, flow, |x, y| {
                    let inside = (0.25..=0.75).contains(&y);
                    let bump = |c: f64| (-(y - c) * (y - c) / (2.0 * s * s)).exp();
                    [
                        if inside { 2.0 } else { 1.0 },
                        if inside { 0.5 } else { -0.5 },
                        a * (4.0 * PI * x).sin() * (bump(0.75) + bump(0.25)),
                        2.5,
                    ]
                })
            }
            CaseKind::Quirk => {
                let (l, r) = shock_states(self.shock_mach);
                let x_shock = 0.5 * self.nx as f64 * grid.dx;
                let y_mid = 0.5 * self.ny as f64 * grid.dy;
                let eps = self.perturbation;
                // The solver has no mesh coordinates to perturb, so the
                // centreline density carries the ±ε alternation instead.
                CnsState::from_primitive(grid, flow, |x, y| {
                    let mut w = if x < x_shock { l } else { r };
                    if (y - y_mid).abs() < 0.5 * grid.dy {
                        let i = ((x - grid.x0) / grid.dx).round() as usize;
                        w[0] *= if i.is_multiple_of(2) { 1.0 + eps } else { 1.0 - eps };
                    }
                    w
                })
            }
        })
    }

    /// Centreline row used by the oscillation metric.
    pub fn centreline_row(&self) -> usize {
        self.ny / 2
    }
}

/// Post- and pre-shock primitive states `[ρ, u, v, p]` of a shock moving
/// into `[γ, 0, 0, 1]` at Mach `m` (Rankine–Hugoniot).
pub fn shock_states(m: f64) -> ([f64; 4], [f64; 4]) {
    let m2 = m * m;
    let g = GAMMA;
    let post = [
        g * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0),
        2.0 * (m2 - 1.0) / ((g + 1.0) * m),
        0.0,
        (2.0 * g * m2 - (g - 1.0)) / (g + 1.0),
    ];
    (post, [g, 0.0, 0.0, 1.0])
}
