//! Exhaustive grid search over the free leading-error parameters of the
//! optimized straight families.
//!
//! The assembled symbol is affine in the parameters, so it is sampled once
//! for the zero parameter vector and once per unit vector; every grid point
//! is then a linear combination of those sampled curves. The winning point is
//! re-assembled through the ordinary coefficient path before its efficiency
//! is reported.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::str::FromStr;

use crate::coeffs::{
    assembled_straight_weights, central_first, derive_midpoint_family, levels, outer_weights,
    HalfOffset, SchemeCoefficients,
};
use crate::exact::{self, Rat};
use crate::spectral::{self, wavenumbers, Symbol};
use crate::{Error, Result, SchemeId, Variant};

/// Efficiencies closer than this are treated as equal.
const TIE: f64 = 1e-9;

/// Inclusive rational grid `lo, lo + step, …, ≤ hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamRange {
    pub lo: Rat,
    pub hi: Rat,
    pub step: Rat,
}

impl ParamRange {
    pub fn new(lo: Rat, hi: Rat, step: Rat) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidInput(format!("empty range {lo}..{hi}")));
        }
        if !step.is_positive() {
            return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn single(v: Rat) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
            step: Rat::from_integer(1.into()),
        }
    }

    pub fn points(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        let mut v = self.lo.clone();
        while v <= self.hi {
            out.push(v.clone());
            v += &self.step;
        }
        out
    }
}

/// `lo:hi:step` with rational or decimal entries, e.g. `-3/100:1/100:1/1000`.
impl FromStr for ParamRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            exact::parse(t)
                .or_else(|| parse_decimal(t))
                .ok_or_else(|| Error::InvalidInput(format!("cannot parse number '{t}'")))
        };
        match parts.as_slice() {
            [v] => Ok(Self::single(num(v)?)),
            [lo, hi, step] => Self::new(num(lo)?, num(hi)?, num(step)?),
            _ => Err(Error::InvalidInput(format!("expected lo:hi:step, got '{s}'"))),
        }
    }
}

fn parse_decimal(t: &str) -> Option<Rat> {
    let t = t.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    let digits = format!("{ip}{fp}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n: num_bigint::BigInt = digits.parse().ok()?;
    let d = num_bigint::BigInt::from(10u32).pow(fp.len() as u32);
    let r = Rat::new(n, d);
    Some(if neg { -r } else { r })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub eps: f64,
    pub constraint_factor: f64,
    pub ranges: Vec<ParamRange>,
    pub samples: usize,
    pub keep_surface: bool,
}

impl SearchConfig {
    /// Ranges containing the published optima as exact grid points.
    pub fn default_for(order: u32) -> Result<Self> {
        let r = |lo: (i64, i64), hi: (i64, i64), st: (i64, i64)| {
            ParamRange::new(exact::rat(lo.0, lo.1), exact::rat(hi.0, hi.1), exact::rat(st.0, st.1))
        };
        let ranges = match order {
            4 => vec![r((-3, 100), (1, 100), (1, 1000))?, r((-1, 100), (1, 100), (1, 1000))?],
            6 => vec![
                r((0, 1), (1, 200), (1, 12500))?,
                r((-1, 400), (3, 2000), (1, 12500))?,
                r((0, 1), (1, 100), (1, 1250))?,
            ],
            o => return Err(Error::UnsupportedOrder(o)),
        };
        Ok(Self {
            eps: 0.05,
            constraint_factor: 1.05,
            ranges,
            samples: spectral::DEFAULT_SAMPLES,
            keep_surface: false,
        })
    }

    fn validate(&self, order: u32) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidInput(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if self.constraint_factor.is_nan() || self.constraint_factor < 1.0 {
            return Err(Error::InvalidInput("constraint factor must be ≥ 1".into()));
        }
        if self.samples < 2 {
            return Err(Error::InvalidInput("need at least two wavenumber samples".into()));
        }
        if self.ranges.len() != levels(order) {
            return Err(Error::InvalidInput(format!(
                "order {order} has {} parameters, got {} ranges",
                levels(order),
                self.ranges.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub params: Vec<f64>,
    pub ev: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub optimal_params: Vec<Rat>,
    pub ev: f64,
    pub feasible: bool,
    pub evaluated: usize,
    pub surface: Option<Vec<SurfacePoint>>,
}

/// Exact node weights of the parametric family at `params`.
pub fn family_weights(order: u32, params: &[Rat]) -> Result<Vec<(i32, Rat)>> {
    let nlev = levels(order);
    if params.len() != nlev {
        return Err(Error::InvalidInput(format!(
            "order {order} needs {nlev} parameters, got {}",
            params.len()
        )));
    }
    let derivatives = params
        .iter()
        .enumerate()
        .map(|(l, p)| derive_midpoint_family(order, HalfOffset::level(l), p))
        .collect::<Result<Vec<_>>>()?;
    let c = SchemeCoefficients {
        scheme: SchemeId::straight(order, Variant::Opti)?,
        outer: outer_weights(order)?,
        derivatives,
        interpolations: Vec::new(),
        nodal_first: central_first(order)?,
    };
    Ok(assembled_straight_weights(&c))
}

pub fn family_symbol(order: u32, params: &[Rat]) -> Result<Symbol> {
    let w: Vec<(i32, f64)> = family_weights(order, params)?
        .iter()
        .map(|(p, w)| (*p, exact::to_f64(w)))
        .collect();
    Ok(Symbol::from_weights(SchemeId::straight(order, Variant::Opti)?, &w))
}

/// Resolving efficiency of the family at `params` through the full
/// assembly path.
pub fn family_efficiency(order: u32, params: &[Rat], eps: f64, samples: usize) -> Result<f64> {
    family_symbol(order, params)?.resolving_efficiency(eps, samples)
}

/// Whether `symbol(k) ≥ factor · (−k²)` on every sample.
pub fn family_feasible(order: u32, params: &[Rat], factor: f64, samples: usize) -> Result<bool> {
    let s = family_symbol(order, params)?;
    Ok(wavenumbers(samples).all(|k| s.eval(k) >= -factor * k * k))
}

/// Symbol samples `S0 + Σ p_i S_i` for the affine decomposition.
struct AffineCurves {
    k: Vec<f64>,
    base: Vec<f64>,
    dirs: Vec<Vec<f64>>,
}

impl AffineCurves {
    fn new(order: u32, samples: usize) -> Result<Self> {
        let nlev = levels(order);
        let zero = vec![Rat::zero(); nlev];
        let w0 = family_weights(order, &zero)?;
        let k: Vec<f64> = wavenumbers(samples).collect();
        let eval = |w: &[(i32, Rat)]| -> Vec<f64> {
            let wf: Vec<(i32, f64)> = w.iter().map(|(p, w)| (*p, exact::to_f64(w))).collect();
            let s = Symbol::from_weights(SchemeId::straight(order, Variant::Opti).unwrap(), &wf);
            k.iter().map(|&k| s.eval(k)).collect()
        };
        let base = eval(&w0);
        let mut dirs = Vec::with_capacity(nlev);
        for i in 0..nlev {
            let mut e = zero.clone();
            e[i] = Rat::from_integer(1.into());
            let wi = family_weights(order, &e)?;
            // exact difference of the two weight sets
            let mut diff: std::collections::BTreeMap<i32, Rat> = Default::default();
            for (p, w) in wi {
                *diff.entry(p).or_insert_with(Rat::zero) += w;
            }
            for (p, w) in &w0 {
                *diff.entry(*p).or_insert_with(Rat::zero) -= w;
            }
            dirs.push(eval(&diff.into_iter().collect::<Vec<_>>()));
        }
        Ok(Self { k, base, dirs })
    }

    /// `(e_v, feasible)` from the samples, with linear interpolation of the
    /// first crossing.
    fn evaluate(&self, p: &[f64], eps: f64, factor: f64) -> (f64, bool) {
        let mut ev = None;
        let mut feasible = true;
        let mut prev: Option<(f64, f64)> = None;
        for (i, &k) in self.k.iter().enumerate() {
            let mut s = self.base[i];
            for (d, pi) in self.dirs.iter().zip(p) {
                s += pi * d[i];
            }
            if s < -factor * k * k {
                feasible = false;
            }
            if ev.is_none() && k > 0.0 {
                let e = (s + k * k).abs() / (k * k);
                if e >= eps {
                    let k0 = match prev {
                        Some((kp, ep)) if e > ep => kp + (eps - ep) / (e - ep) * (k - kp),
                        _ => k,
                    };
                    ev = Some(k0 / std::f64::consts::PI);
                }
                prev = Some((k, e));
            }
        }
        (ev.unwrap_or(1.0), feasible)
    }
}

fn l1(p: &[Rat]) -> Rat {
    p.iter().fold(Rat::zero(), |a, b| a + b.abs())
}

/// `Greater` when `a` is the better candidate.
fn better(a: (f64, &[Rat]), b: (f64, &[Rat])) -> Ordering {
    if (a.0 - b.0).abs() > TIE {
        return a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal);
    }
    match l1(b.1).cmp(&l1(a.1)) {
        Ordering::Equal => b.1.cmp(a.1),
        o => o,
    }
}

fn grid(ranges: &[ParamRange]) -> Vec<Vec<Rat>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        let pts = r.points();
        out = out
            .into_iter()
            .flat_map(|head| {
                pts.iter().map(move |p| {
                    let mut h = head.clone();
                    h.push(p.clone());
                    h
                })
            })
            .collect();
    }
    out
}

/// Maximizes the resolving efficiency over the configured grid subject to
/// the over-dissipation cap `symbol(k) ≥ factor · (−k²)`.
pub fn search_straight(order: u32, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate(order)?;
    let curves = AffineCurves::new(order, cfg.samples)?;
    let points = grid(&cfg.ranges);
    let mut best: Option<(f64, Vec<Rat>)> = None;
    let mut best_infeasible: Option<(f64, Vec<Rat>)> = None;
    let mut surface = cfg.keep_surface.then(Vec::new);
    for p in &points {
        let pf: Vec<f64> = p.iter().map(exact::to_f64).collect();
        let (ev, feasible) = curves.evaluate(&pf, cfg.eps, cfg.constraint_factor);
        if let Some(s) = surface.as_mut() {
            s.push(SurfacePoint {
                params: pf,
                ev,
                feasible,
            });
        }
        let slot = if feasible { &mut best } else { &mut best_infeasible };
        let replace = match slot {
            None => true,
            Some((e, q)) => better((ev, p), (*e, q)) == Ordering::Greater,
        };
        if replace {
            *slot = Some((ev, p.clone()));
        }
    }
    let (feasible, params) = match (best, best_infeasible) {
        (Some((_, p)), _) => (true, p),
        (None, Some((_, p))) => (false, p),
        (None, None) => return Err(Error::InvalidInput("empty search grid".into())),
    };
    let ev = family_efficiency(order, &params, cfg.eps, cfg.samples)?;
    Ok(SearchResult {
        optimal_params: params,
        ev,
        feasible,
        evaluated: points.len(),
        surface,
    })
}

/// Every grid point's efficiency and feasibility (for contour plots; use
/// single-valued ranges to take 2D slices of the 6th-order family).
pub fn efficiency_surface(order: u32, cfg: &SearchConfig) -> Result<Vec<SurfacePoint>> {
    let mut c = cfg.clone();
    c.keep_surface = true;
    Ok(search_straight(order, &c)?.surface.unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn range_parsing() {
        let r: ParamRange = "-3/100:0.01:1/1000".parse().unwrap();
        assert_eq!(r.lo, rat(-3, 100));
        assert_eq!(r.hi, rat(1, 100));
        assert_eq!(r.points().len(), 41);
        assert!("1:0:1".parse::<ParamRange>().is_err());
        assert!("0:1:0".parse::<ParamRange>().is_err());
        assert_eq!("-.5".parse::<ParamRange>().unwrap().points(), vec![rat(-1, 2)]);
    }

    #[test]
    fn affine_curves_match_direct_assembly() {
        let c = AffineCurves::new(4, 65).unwrap();
        let p = [rat(-1, 100), rat(3, 1000)];
        let s = family_symbol(4, &p).unwrap();
        for (i, &k) in c.k.iter().enumerate() {
            let affine = c.base[i] - 0.01 * c.dirs[0][i] + 0.003 * c.dirs[1][i];
            assert!((s.eval(k) - affine).abs() < 1e-12);
        }
    }

    #[test]
    fn single_point_grid_returns_that_point() {
        let mut cfg = SearchConfig::default_for(4).unwrap();
        cfg.ranges = vec![ParamRange::single(rat(0, 1)), ParamRange::single(rat(0, 1))];
        let r = search_straight(4, &cfg).unwrap();
        assert_eq!(r.optimal_params, vec![rat(0, 1), rat(0, 1)]);
        assert_eq!(r.evaluated, 1);
        let ev = family_efficiency(4, &r.optimal_params, 0.05, cfg.samples).unwrap();
        assert_eq!(r.ev, ev);
    }

    #[test]
    fn tie_break_prefers_small_norm_then_lexicographic() {
        let a = [rat(1, 10), rat(0, 1)];
        let b = [rat(0, 1), rat(1, 10)];
        let c = [rat(1, 10), rat(1, 10)];
        assert_eq!(better((0.5, &b), (0.5, &a)), Ordering::Greater);
        assert_eq!(better((0.5, &a), (0.5, &c)), Ordering::Greater);
        assert_eq!(better((0.6, &c), (0.5, &a)), Ordering::Greater);
    }
}
