//! Coefficient, spectral, optimizer and 1D/2D operator subcommands.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use mevisc::coeffs::{self, assembled_straight_weights};
use mevisc::operators::{
    ghost_fill, Axis, FillPolicy, FilterPenaltySign, InterfaceViscosity, OperatorOptions, Padded2D,
    ViscousOperator,
};
use mevisc::optimizer::{search_straight, ParamRange, SearchConfig};
use mevisc::pde_suite::{self, DiffusionCase, GridConvention};
use mevisc::spectral::{spectral_viscosity, SpectralCurve, Symbol};
use mevisc::{exact, SchemeId, TermKind};

use crate::output::{Artifact, Cell, Format, Outputs, Table};

pub fn parse_scheme(s: &str) -> Result<String, String> {
    if s.eq_ignore_ascii_case("nishikawa-linear") {
        return Ok(s.to_ascii_lowercase());
    }
    s.parse::<SchemeId>().map(|_| s.to_ascii_lowercase()).map_err(|e| e.to_string())
}

pub fn parse_term(s: &str) -> Result<String, String> {
    s.parse::<TermKind>().map(|_| s.to_ascii_lowercase()).map_err(|e| e.to_string())
}

fn scheme(name: &str, term: &str) -> Result<SchemeId> {
    let name = if name == "nishikawa-linear" { "nishikawa" } else { name };
    let s: SchemeId = name.parse()?;
    Ok(s.with_term(term.parse()?)?)
}

pub fn penalty(s: &str) -> Result<FilterPenaltySign> {
    match s {
        "antisymmetric" => Ok(FilterPenaltySign::Antisymmetric),
        "symmetric" => Ok(FilterPenaltySign::Symmetric),
        o => bail!("unknown penalty sign '{o}' (antisymmetric|symmetric)"),
    }
}

fn interface(s: &str) -> Result<InterfaceViscosity> {
    match s {
        "average" => Ok(InterfaceViscosity::Average),
        "fourth" => Ok(InterfaceViscosity::Fourth),
        o => bail!("unknown interface viscosity '{o}' (average|fourth)"),
    }
}

/// `periodic`, `extrapolate` (degree 3) or `extrapolate-<degree>`.
fn fill(s: &str) -> Result<FillPolicy> {
    match s {
        "periodic" => Ok(FillPolicy::Periodic),
        "extrapolate" => Ok(FillPolicy::Extrapolate { degree: 3 }),
        _ => s
            .strip_prefix("extrapolate-")
            .and_then(|d| d.parse().ok())
            .map(|degree| FillPolicy::Extrapolate { degree })
            .ok_or_else(|| anyhow!("unknown fill policy '{s}'")),
    }
}

fn set<T: Clone>(slot: &mut Option<T>, default: T) -> T {
    slot.get_or_insert(default).clone()
}

// ---------------------------------------------------------------- coeffs

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct CoeffsOpts {
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<String>,
    /// straight | mixed
    #[arg(long, value_parser = parse_term)]
    pub term: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

pub fn coeffs(o: &mut CoeffsOpts) -> Result<Outputs> {
    let sid = scheme(&set(&mut o.scheme, "me4-opti".into()), &set(&mut o.term, "straight".into()))?;
    set(&mut o.format, Format::Json);
    let c = coeffs::catalog(sid)?;
    let rows = coeffs::dump(&c);
    let mut extra = Vec::new();
    if sid.term() == TermKind::Straight {
        let mut t = Table::new(&["offset", "numerator", "denominator", "value"]);
        for (p, w) in assembled_straight_weights(&c) {
            let n = w.numer().to_string();
            let d = w.denom().to_string();
            t.push(vec![Cell::Int(p.into()), Cell::Text(n), Cell::Text(d), exact::to_f64(&w).into()]);
        }
        extra.push(("assembled".to_string(), Artifact::Table(t)));
    }
    Ok(Outputs {
        summary: json!({ "scheme": sid.slug(), "term": o.term, "rows": rows.len() }),
        primary: ("coeffs".into(), Artifact::Json(serde_json::to_value(rows)?)),
        extra,
    })
}

// ---------------------------------------------------------------- spectra

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectraOpts {
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<String>,
    #[arg(long, value_parser = parse_term)]
    pub term: Option<String>,
    /// Uniform wavenumber samples on [0, π] (at least 2).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub samples: Option<u64>,
    /// Relative error threshold of the resolving efficiency.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Physical viscosity scaling the spectral viscosity.
    #[arg(long)]
    pub nu: Option<f64>,
    /// antisymmetric | symmetric
    #[arg(long)]
    pub penalty: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

pub fn spectra(o: &mut SpectraOpts) -> Result<Outputs> {
    let sid = scheme(&set(&mut o.scheme, "me4-opti".into()), &set(&mut o.term, "straight".into()))?;
    let samples = set(&mut o.samples, 1024) as usize;
    if samples < 2 {
        bail!("need at least two wavenumber samples");
    }
    let eps = set(&mut o.eps, 0.05);
    let nu = set(&mut o.nu, 1.0);
    let opts = OperatorOptions {
        penalty: penalty(&set(&mut o.penalty, "antisymmetric".into()))?,
        ..Default::default()
    };
    set(&mut o.format, Format::Csv);
    let sym = Symbol::with_options(sid, opts)?;
    let exact = SpectralCurve::exact(sid.term(), samples);
    let mut t = Table::new(&["k", "kstar_exact", "kstar_scheme", "spectral_viscosity"]);
    for (k, ke) in exact.samples {
        let ks = sym.eval(k);
        let sv = if k > 0.0 { Some(spectral_viscosity(ks, nu, k)?) } else { None };
        t.push(vec![k.into(), ke.into(), ks.into(), sv.into()]);
    }
    let pi = std::f64::consts::PI;
    let mut summary = json!({
        "scheme": sid.slug(),
        "term": o.term,
        "resolving_efficiency": sym.resolving_efficiency(eps, samples)?,
        "eps": eps,
        "spectral_viscosity_at_cutoff": spectral_viscosity(sym.eval(pi), nu, pi)?,
    });
    if sid.term() == TermKind::Straight {
        let (k, d) = sym.amplification_bound(samples);
        summary["amplification_bound"] = json!(d);
        summary["amplification_bound_k"] = json!(k);
    }
    Ok(Outputs {
        primary: ("spectrum".into(), Artifact::Table(t)),
        extra: vec![("summary".into(), Artifact::Json(summary.clone()))],
        summary,
    })
}

// ---------------------------------------------------------------- optimize

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizeOpts {
    /// 4 or 6
    #[arg(long)]
    pub order: Option<u32>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Over-dissipation cap: the symbol may not drop below factor·(−k²).
    #[arg(long)]
    pub constraint_factor: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// One `lo:hi:step` per free parameter (rationals or decimals).
    #[arg(long = "range", num_args = 1.., value_delimiter = ',')]
    pub ranges: Option<Vec<String>>,
    /// Also write every evaluated grid point.
    #[arg(long)]
    pub surface: Option<bool>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

pub fn optimize(o: &mut OptimizeOpts) -> Result<Outputs> {
    let order = set(&mut o.order, 4);
    let mut cfg = SearchConfig::default_for(order)?;
    cfg.eps = set(&mut o.eps, cfg.eps);
    cfg.constraint_factor = set(&mut o.constraint_factor, cfg.constraint_factor);
    cfg.samples = set(&mut o.samples, cfg.samples);
    let defaults: Vec<String> = cfg.ranges.iter().map(|r| format!("{}:{}:{}", r.lo, r.hi, r.step)).collect();
    cfg.ranges = set(&mut o.ranges, defaults)
        .iter()
        .map(|r| r.parse::<ParamRange>())
        .collect::<mevisc::Result<_>>()?;
    cfg.keep_surface = set(&mut o.surface, false);
    set(&mut o.format, Format::Csv);
    let r = search_straight(order, &cfg)?;
    let params: Vec<String> = r.optimal_params.iter().map(|p| p.to_string()).collect();
    let summary = json!({
        "order": order,
        "optimal_params": params,
        "optimal_params_f64": r.optimal_params.iter().map(exact::to_f64).collect::<Vec<_>>(),
        "ev": r.ev,
        "feasible": r.feasible,
        "evaluated": r.evaluated,
    });
    let mut extra = Vec::new();
    if let Some(points) = r.surface {
        let n = cfg.ranges.len();
        let names: Vec<String> = (0..n).map(|i| format!("p{}", i + 1)).collect();
        let mut cols: Vec<&str> = names.iter().map(String::as_str).collect();
        cols.extend(["ev", "feasible"]);
        let mut t = Table::new(&cols);
        for p in points {
            let mut row: Vec<Cell> = p.params.into_iter().map(Cell::from).collect();
            row.push(p.ev.into());
            row.push(p.feasible.into());
            t.push(row);
        }
        extra.push(("surface".into(), Artifact::Table(t)));
    }
    Ok(Outputs {
        primary: ("optimum".into(), Artifact::Json(summary.clone())),
        extra,
        summary,
    })
}

// ---------------------------------------------------------------- oa

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct OaOpts {
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<String>,
    #[arg(long, value_parser = parse_term)]
    pub term: Option<String>,
    /// Comma-separated, strictly increasing grid sizes.
    #[arg(long, num_args = 1.., value_delimiter = ',', required = false)]
    pub grids: Option<Vec<usize>>,
    /// cells | nodes
    #[arg(long)]
    pub convention: Option<String>,
    #[arg(long)]
    pub penalty: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

pub fn oa(o: &mut OaOpts) -> Result<Outputs> {
    let sid = scheme(&set(&mut o.scheme, "me4-opti".into()), &set(&mut o.term, "straight".into()))?;
    let grids = set(&mut o.grids, vec![20, 40, 80, 160, 320]);
    let convention = match set(&mut o.convention, "cells".into()).as_str() {
        "cells" => GridConvention::CellCentres,
        "nodes" => GridConvention::Nodes,
        c => bail!("unknown grid convention '{c}' (cells|nodes)"),
    };
    let opts = OperatorOptions {
        penalty: penalty(&set(&mut o.penalty, "antisymmetric".into()))?,
        // the α-damping reference uses 4th-order interface viscosity here
        interface_viscosity: InterfaceViscosity::Fourth,
        ..Default::default()
    };
    set(&mut o.format, Format::Csv);
    let op = ViscousOperator::with_options(sid, opts)?;
    let study = match sid.term() {
        TermKind::Straight => pde_suite::oa_straight(&op, &grids, convention)?,
        TermKind::Mixed => pde_suite::oa_mixed(&op, &grids, convention)?,
    };
    let mut t = Table::new(&["N", "L1", "order"]);
    for ((n, e), ord) in study.grids.iter().zip(&study.errors).zip(&study.orders) {
        t.push(vec![(*n).into(), (*e).into(), (*ord).into()]);
    }
    let summary = serde_json::to_value(&study)?;
    Ok(Outputs {
        primary: ("oa".into(), Artifact::Table(t)),
        extra: vec![("summary".into(), Artifact::Json(summary.clone()))],
        summary,
    })
}

// ---------------------------------------------------------------- diffuse

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DiffuseOpts {
    /// Straight scheme; `nishikawa-linear` is the α-damping reference with
    /// averaged interface viscosity.
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, alias = "tend")]
    pub t_end: Option<f64>,
    /// average | fourth (α-damping reference only)
    #[arg(long)]
    pub interface: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

pub fn diffuse(o: &mut DiffuseOpts) -> Result<Outputs> {
    let sid = scheme(&set(&mut o.scheme, "me4-opti".into()), "straight")?;
    let mut case = DiffusionCase::standard(sid);
    case.n = set(&mut o.n, case.n);
    case.dt = set(&mut o.dt, case.dt);
    case.t_end = set(&mut o.t_end, case.t_end);
    case.options.interface_viscosity = interface(&set(&mut o.interface, "average".into()))?;
    set(&mut o.format, Format::Csv);
    let r = pde_suite::run_diffusion(&case)?;
    let mut profile = Table::new(&["x", "f"]);
    for (x, f) in r.x.iter().zip(&r.f) {
        profile.push(vec![(*x).into(), (*f).into()]);
    }
    let mut history = Table::new(&["t", "max_f"]);
    for (t, m) in &r.max_history {
        history.push(vec![(*t).into(), (*m).into()]);
    }
    let summary = json!({ "scheme": sid.slug(), "n": case.n, "steps": r.steps, "peak": r.peak() });
    Ok(Outputs {
        primary: ("profile".into(), Artifact::Table(profile)),
        extra: vec![
            ("max_history".into(), Artifact::Table(history)),
            ("summary".into(), Artifact::Json(summary.clone())),
        ],
        summary,
    })
}

// ---------------------------------------------------------------- apply

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ApplyOpts {
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<String>,
    #[arg(long, value_parser = parse_term)]
    pub term: Option<String>,
    /// CSV with columns `phi,mu` (straight) or `i,j,phi,mu` (mixed).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long)]
    pub dy: Option<f64>,
    /// periodic | extrapolate | extrapolate-<degree>
    #[arg(long)]
    pub fill: Option<String>,
    /// Outer derivative axis of a mixed term: x | y
    #[arg(long)]
    pub outer: Option<String>,
    #[arg(long)]
    pub penalty: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn read_columns(path: &PathBuf) -> Result<BTreeMap<String, Vec<f64>>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let mut cols: BTreeMap<String, Vec<f64>> = headers.iter().map(|h| (h.clone(), Vec::new())).collect();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        for (h, v) in headers.iter().zip(rec.iter()) {
            let x: f64 = v
                .trim()
                .parse()
                .with_context(|| format!("row {}: column {h}: '{v}' is not a number", line + 1))?;
            cols.get_mut(h).expect("header present").push(x);
        }
    }
    Ok(cols)
}

pub fn apply(o: &mut ApplyOpts) -> Result<Outputs> {
    let sid = scheme(&set(&mut o.scheme, "me4-opti".into()), &set(&mut o.term, "straight".into()))?;
    let input = o.input.clone().ok_or_else(|| anyhow!("apply needs an input CSV"))?;
    let dx = set(&mut o.dx, 1.0);
    let dy = set(&mut o.dy, dx);
    let fill = fill(&set(&mut o.fill, "periodic".into()))?;
    let opts = OperatorOptions {
        penalty: penalty(&set(&mut o.penalty, "antisymmetric".into()))?,
        ..Default::default()
    };
    set(&mut o.format, Format::Csv);
    let op = ViscousOperator::with_options(sid, opts)?;
    let cols = read_columns(&input)?;
    let col = |name: &str| cols.get(name).ok_or_else(|| anyhow!("input lacks column '{name}'"));
    let (phi, mu) = (col("phi")?, col("mu")?);
    if !(dx > 0.0 && dy > 0.0) {
        bail!("spacings must be positive");
    }
    let t = match sid.term() {
        TermKind::Straight => {
            let g = op.ghost_width();
            if phi.len() < 2 * g + 1 {
                bail!("need at least {} values, got {}", 2 * g + 1, phi.len());
            }
            let pe = ghost_fill(phi, g, fill)?;
            let me = ghost_fill(mu, g, fill)?;
            let out = mevisc::operators::straight_d2_padded(&op, &pe, &me, g, dx)?;
            let mut t = Table::new(&["index", "result"]);
            for (k, v) in out.into_iter().enumerate() {
                t.push(vec![k.into(), v.into()]);
            }
            t
        }
        TermKind::Mixed => {
            let (ic, jc) = (col("i")?, col("j")?);
            let nx = ic.iter().fold(0.0_f64, |a, b| a.max(*b)) as usize + 1;
            let ny = jc.iter().fold(0.0_f64, |a, b| a.max(*b)) as usize + 1;
            if phi.len() != nx * ny {
                bail!("expected {nx}×{ny} = {} rows, got {}", nx * ny, phi.len());
            }
            let (mut pv, mut mv) = (vec![f64::NAN; nx * ny], vec![f64::NAN; nx * ny]);
            for k in 0..phi.len() {
                let idx = ic[k] as usize * ny + jc[k] as usize;
                pv[idx] = phi[k];
                mv[idx] = mu[k];
            }
            if pv.iter().any(|v| v.is_nan()) {
                bail!("grid indices do not cover the {nx}×{ny} grid");
            }
            let g = op.ghost_width().max(op.inner_ghost_width());
            if nx.min(ny) < 2 * g + 1 {
                bail!("grid {nx}×{ny} too small for the stencil");
            }
            let p = Padded2D::from_interior(&pv, nx, ny, g, [fill; 2])?;
            let m = Padded2D::from_interior(&mv, nx, ny, g, [fill; 2])?;
            let (outer, d_outer, d_inner) = match set(&mut o.outer, "x".into()).as_str() {
                "x" => (Axis::X, dx, dy),
                "y" => (Axis::Y, dy, dx),
                a => bail!("unknown axis '{a}'"),
            };
            let out = mevisc::operators::mixed_d2_padded(&op, &p, &m, outer, d_outer, d_inner)?;
            let mut t = Table::new(&["i", "j", "result"]);
            for i in 0..nx {
                for j in 0..ny {
                    t.push(vec![i.into(), j.into(), out[i * ny + j].into()]);
                }
            }
            t
        }
    };
    let summary = json!({ "scheme": sid.slug(), "term": o.term, "points": t.rows.len() });
    Ok(Outputs {
        primary: ("result".into(), Artifact::Table(t)),
        extra: Vec::new(),
        summary,
    })
}
