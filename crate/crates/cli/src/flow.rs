//! Navier–Stokes runs and filter-cycle scans.

use anyhow::{anyhow, bail, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use mevisc::operators::OperatorOptions;
use mevisc_cns2d::diagnostics::{braid_enstrophy, enstrophy, ke_dissipation, oscillation_metric};
use mevisc_cns2d::cases::shock_states;
use mevisc_cns2d::{
    run_case, theta_stability_scan, CaseConfig, CaseKind, FilterPolicy, InviscidScheme, RunOutcome,
    ViscosityLaw, ViscousModel,
};

use crate::analysis::{parse_scheme, penalty};
use crate::output::{Artifact, Format, Outputs, Table};

fn parse_case(s: &str) -> Result<String, String> {
    s.parse::<CaseKind>().map(|_| s.to_ascii_lowercase()).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<String, String> {
    grid(s).map(|_| s.to_string()).map_err(|e| e.to_string())
}

fn grid(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| anyhow!("grid must look like NXxNY, got '{s}'"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

/// Flat run configuration; unset keys take the case defaults.
#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunOpts {
    /// dpsl | khi | quirk
    #[arg(long, value_parser = parse_case)]
    pub case: Option<String>,
    /// NXxNY
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<String>,
    /// Viscous scheme, or `none` for inviscid runs.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Filter cycle Θ in steps; 0 disables the filter.
    #[arg(long)]
    pub theta: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Fixed time step overriding the CFL policy.
    #[arg(long)]
    pub fixed_dt: Option<f64>,
    #[arg(long, alias = "tend")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub re: Option<f64>,
    #[arg(long)]
    pub mach: Option<f64>,
    #[arg(long)]
    pub pr: Option<f64>,
    /// central6 | weno5-hll
    #[arg(long)]
    pub inviscid: Option<String>,
    /// constant | sutherland
    #[arg(long)]
    pub viscosity: Option<String>,
    #[arg(long)]
    pub penalty: Option<String>,
    #[arg(long)]
    pub shear: Option<f64>,
    #[arg(long)]
    pub perturbation: Option<f64>,
    #[arg(long)]
    pub shock_mach: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn set<T: Clone>(slot: &mut Option<T>, default: T) -> T {
    slot.get_or_insert(default).clone()
}

impl RunOpts {
    /// Fills every unset key from the case defaults and builds the solver
    /// configuration.
    pub fn resolve(&mut self) -> Result<CaseConfig> {
        let kind: CaseKind = set(&mut self.case, "dpsl".into()).parse()?;
        let mut c = CaseConfig::default_for(kind);
        let (nx, ny) = grid(&set(&mut self.grid, format!("{}x{}", c.nx, c.ny)))?;
        c.nx = nx;
        c.ny = ny;
        let default_scheme = c.viscous.map_or("none".into(), |m| m.scheme.slug());
        let scheme = set(&mut self.scheme, default_scheme);
        let law = match set(&mut self.viscosity, "constant".into()).as_str() {
            "constant" => ViscosityLaw::Constant(1.0),
            "sutherland" => ViscosityLaw::sutherland_air(),
            o => bail!("unknown viscosity law '{o}' (constant|sutherland)"),
        };
        let options = OperatorOptions {
            penalty: penalty(&set(&mut self.penalty, "antisymmetric".into()))?,
            ..Default::default()
        };
        c.viscous = match scheme.as_str() {
            "none" => None,
            s => {
                parse_scheme(s).map_err(|e| anyhow!(e))?;
                Some(ViscousModel {
                    scheme: s.parse()?,
                    law,
                    options,
                })
            }
        };
        let theta = set(&mut self.theta, c.filter.map_or(0, |f| f.theta));
        let sigma = set(&mut self.sigma, c.filter.map_or(0.2, |f| f.sigma));
        c.filter = (theta > 0).then_some(FilterPolicy { theta, sigma });
        c.cfl = set(&mut self.cfl, c.cfl);
        c.dt = self.fixed_dt.or(c.dt);
        self.fixed_dt = c.dt;
        c.t_end = set(&mut self.t_end, c.t_end);
        c.max_steps = self.max_steps.or(c.max_steps);
        c.re = set(&mut self.re, c.re);
        c.mach = set(&mut self.mach, c.mach);
        c.pr = set(&mut self.pr, c.pr);
        let inv = match c.inviscid {
            InviscidScheme::Central6 => "central6",
            InviscidScheme::Weno5Hll => "weno5-hll",
        };
        c.inviscid = match set(&mut self.inviscid, inv.into()).as_str() {
            "central6" => InviscidScheme::Central6,
            "weno5-hll" => InviscidScheme::Weno5Hll,
            o => bail!("unknown inviscid scheme '{o}' (central6|weno5-hll)"),
        };
        c.shear = set(&mut self.shear, c.shear);
        c.perturbation = set(&mut self.perturbation, c.perturbation);
        c.shock_mach = set(&mut self.shock_mach, c.shock_mach);
        set(&mut self.format, Format::Csv);
        c.validate()?;
        Ok(c)
    }
}

/// Scalar end-of-run diagnostics appropriate to the case.
pub fn run_summary(cfg: &CaseConfig, out: &RunOutcome) -> serde_json::Value {
    let s = &out.state;
    let mut v = json!({
        "case": cfg.case,
        "completed": out.completed(),
        "steps": out.steps,
        "t": s.t,
        "failure": out.failure,
        "filter_applications": out.filter_applications,
        "weno_fallbacks": out.weno_fallbacks,
        "kinetic_energy": s.kinetic_energy(),
        "enstrophy": enstrophy(s),
    });
    match cfg.case {
        CaseKind::Dpsl => v["braid_enstrophy"] = json!(braid_enstrophy(s)),
        CaseKind::Quirk => {
            let (l, r) = shock_states(cfg.shock_mach);
            v["oscillation_metric"] = json!(oscillation_metric(s, cfg.centreline_row(), l[0] - r[0], 10));
        }
        CaseKind::Khi => {}
    }
    v
}

pub fn run(o: &mut RunOpts) -> Result<Outputs> {
    let cfg = o.resolve()?;
    let out = run_case(&cfg)?;
    let s = &out.state;
    let g = s.grid;
    let prim = s.primitives();
    let w = s.vorticity();
    let mut snap = Table::new(&["i", "j", "x", "y", "rho", "u", "v", "p", "vorticity"]);
    for i in 0..g.nx {
        for j in 0..g.ny {
            let k = i * g.ny + j;
            snap.push(vec![
                i.into(),
                j.into(),
                g.x(i).into(),
                g.y(j).into(),
                prim.rho[k].into(),
                prim.u[k].into(),
                prim.v[k].into(),
                prim.p[k].into(),
                w[k].into(),
            ]);
        }
    }
    let mut diag = Table::new(&["step", "t", "ke", "eps_ke"]);
    for (n, (k, (_, e))) in out.ke.iter().zip(ke_dissipation(&out.ke)).enumerate() {
        diag.push(vec![n.into(), k.t.into(), k.ke.into(), e.into()]);
    }
    let summary = run_summary(&cfg, &out);
    let meta = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "outcome": summary,
    });
    Ok(Outputs {
        primary: ("run".into(), Artifact::Json(meta)),
        extra: vec![
            ("snapshot".into(), Artifact::Table(snap)),
            ("diagnostics".into(), Artifact::Table(diag)),
        ],
        summary,
    })
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanOpts {
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunOpts,
    /// Smallest Θ tried.
    #[arg(long)]
    pub lo: Option<usize>,
    /// Largest Θ tried.
    #[arg(long)]
    pub hi: Option<usize>,
}

pub fn scan_theta(o: &mut ScanOpts) -> Result<Outputs> {
    let cfg = o.run.resolve()?;
    let lo = set(&mut o.lo, 1);
    let hi = set(&mut o.hi, 400);
    let scan = theta_stability_scan(&cfg, lo, hi)?;
    let mut t = Table::new(&["theta", "completed", "steps"]);
    for r in &scan.runs {
        t.push(vec![r.theta.into(), r.completed.into(), r.steps.into()]);
    }
    let summary = json!({
        "case": cfg.case,
        "scheme": cfg.viscous.map(|m| m.scheme.slug()),
        "max_stable": scan.max_stable,
        "runs": scan.runs.len(),
    });
    Ok(Outputs {
        primary: ("scan".into(), Artifact::Table(t)),
        extra: vec![("summary".into(), Artifact::Json(summary.clone()))],
        summary,
    })
}
