//! Modified-wavenumber analysis of the assembled operators.
//!
//! The symbol of a scheme is obtained from the operator itself: the
//! production kernel is applied to a periodic impulse with `μ ≡ 1` and unit
//! spacing, which yields the effective node weights `W_p`. The symbol of the
//! straight term is then `Σ_p W_p e^{ikp}` and the mixed symbol `k*_xy` is
//! `Σ_{p,q} W_{p,q} e^{ik(p+q)}` (response to `e^{ik(x+y)}`). For central
//! schemes the imaginary part vanishes up to roundoff.

use serde::{Deserialize, Serialize};

use crate::coeffs::{SchemeId, TermKind};
use crate::operators::{
    mixed_d2_accumulate, straight_d2_padded, Axis, FillPolicy, OperatorOptions, Padded2D,
    ViscousOperator,
};
use crate::{Error, Result};

use std::f64::consts::PI;

/// Default number of uniform wavenumber samples on `[0, π]`.
pub const DEFAULT_SAMPLES: usize = 4096;

/// Effective node weights of an operator with unit diffusivity and spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Symbol {
    pub scheme: SchemeId,
    /// `((p, q), W)`; `q = 0` for straight schemes.
    pub weights: Vec<((i32, i32), f64)>,
}

impl Symbol {
    pub fn new(scheme: SchemeId) -> Result<Self> {
        Self::with_options(scheme, OperatorOptions::default())
    }

    pub fn with_options(scheme: SchemeId, opts: OperatorOptions) -> Result<Self> {
        let op = ViscousOperator::with_options(scheme, opts)?;
        let weights = match scheme.term() {
            TermKind::Straight => straight_impulse(&op)?,
            TermKind::Mixed => mixed_impulse(&op)?,
        };
        Ok(Self { scheme, weights })
    }

    /// Builds a straight symbol from explicit node weights.
    pub fn from_weights(scheme: SchemeId, weights: &[(i32, f64)]) -> Self {
        Self {
            scheme,
            weights: weights.iter().map(|&(p, w)| ((p, 0), w)).collect(),
        }
    }

    /// Complex symbol `(re, im)` at wavenumber `k`.
    pub fn eval_complex(&self, k: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for &((p, q), w) in &self.weights {
            let a = k * f64::from(p + q);
            // cos a − 1 written without cancellation; the weights sum to zero
            re += -2.0 * w * (0.5 * a).sin().powi(2);
            im += w * a.sin();
        }
        (re, im)
    }

    /// Real symbol `k*` at `k`.
    pub fn eval(&self, k: f64) -> f64 {
        self.eval_complex(k).0
    }

    pub fn curve(&self, samples: usize) -> SpectralCurve {
        SpectralCurve {
            scheme: Some(self.scheme),
            kind: self.scheme.term(),
            samples: wavenumbers(samples).map(|k| (k, self.eval(k))).collect(),
        }
    }

    /// Resolving efficiency with bisection refinement of the first crossing.
    pub fn resolving_efficiency(&self, eps: f64, samples: usize) -> Result<f64> {
        resolving_efficiency_fn(|k| self.eval(k), eps, samples)
    }

    /// `max_k |symbol(k)| / 2` over the uniform scan.
    pub fn amplification_bound(&self, samples: usize) -> (f64, f64) {
        wavenumbers(samples)
            .map(|k| (k, self.eval(k).abs() / 2.0))
            .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a })
    }
}

fn straight_impulse(op: &ViscousOperator) -> Result<Vec<((i32, i32), f64)>> {
    let r = op.ghost_width();
    let m = 4 * r + 3;
    let g = r;
    let mut phi = vec![0.0; m + 2 * g];
    phi[g] = 1.0;
    crate::operators::fill_in_place(&mut phi, g, FillPolicy::Periodic)?;
    let mu = vec![1.0; phi.len()];
    let out = straight_d2_padded(op, &phi, &mu, g, 1.0)?;
    // out_j = Σ_p W_p δ_{j+p}  =>  W_p = out[−p mod m]
    let mut w = Vec::new();
    for p in -(r as i32)..=(r as i32) {
        let v = out[(-p).rem_euclid(m as i32) as usize];
        if v != 0.0 {
            w.push(((p, 0), v));
        }
    }
    Ok(w)
}

fn mixed_impulse(op: &ViscousOperator) -> Result<Vec<((i32, i32), f64)>> {
    let r = op.ghost_width().max(op.inner_ghost_width());
    let m = 4 * r + 3;
    let mut vals = vec![0.0; m * m];
    vals[0] = 1.0;
    let fill = [FillPolicy::Periodic; 2];
    let phi = Padded2D::from_interior(&vals, m, m, r, fill)?;
    let mu = Padded2D::from_interior(&vec![1.0; m * m], m, m, r, fill)?;
    let mut out = vec![0.0; m * m];
    mixed_d2_accumulate(op, &phi, &mu, Axis::X, 1.0, 1.0, 1.0, &mut out)?;
    let mut w = Vec::new();
    let ri = r as i32;
    for p in -ri..=ri {
        for q in -ri..=ri {
            let i = (-p).rem_euclid(m as i32) as usize;
            let j = (-q).rem_euclid(m as i32) as usize;
            let v = out[i * m + j];
            if v != 0.0 {
                w.push(((p, q), v));
            }
        }
    }
    Ok(w)
}

/// Uniform samples `k_i = iπ/(n−1)`, `i = 0..n`.
pub fn wavenumbers(n: usize) -> impl Iterator<Item = f64> {
    let d = if n > 1 { PI / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| i as f64 * d)
}

/// Sampled modified-wavenumber curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurve {
    pub scheme: Option<SchemeId>,
    pub kind: TermKind,
    /// `(k, k*)` pairs, increasing in `k`.
    pub samples: Vec<(f64, f64)>,
}

impl SpectralCurve {
    /// The exact curve `k* = −k²`.
    pub fn exact(kind: TermKind, samples: usize) -> Self {
        Self {
            scheme: None,
            kind,
            samples: wavenumbers(samples).map(|k| (k, -k * k)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub resolving_efficiency: f64,
    pub eps: f64,
    pub spectral_viscosity_at_cutoff: f64,
    pub curve: SpectralCurve,
}

pub fn report(scheme: SchemeId, eps: f64, samples: usize) -> Result<SpectralReport> {
    let s = Symbol::new(scheme)?;
    Ok(SpectralReport {
        resolving_efficiency: s.resolving_efficiency(eps, samples)?,
        eps,
        spectral_viscosity_at_cutoff: spectral_viscosity(s.eval(PI), 1.0, PI)?,
        curve: s.curve(samples),
    })
}

pub fn symbol_straight(scheme: SchemeId, k: f64) -> Result<f64> {
    let s = scheme.with_term(TermKind::Straight)?;
    Ok(Symbol::new(s)?.eval(k))
}

pub fn symbol_mixed(scheme: SchemeId, k: f64) -> Result<f64> {
    let s = scheme.with_term(TermKind::Mixed)?;
    Ok(Symbol::new(s)?.eval(k))
}

fn relative_error(k: f64, ks: f64) -> f64 {
    (ks + k * k).abs() / (k * k)
}

/// `k₀/π` for the smallest sampled `k > 0` whose relative deviation from
/// `−k²` reaches `eps`; 1 if none does. Linear interpolation of the
/// deviation between the bracketing samples locates the crossing.
pub fn resolving_efficiency(curve: &SpectralCurve, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if curve.samples.is_empty() {
        return Err(Error::InvalidInput("empty spectral curve".into()));
    }
    let mut prev: Option<(f64, f64)> = None;
    for &(k, ks) in &curve.samples {
        if k <= 0.0 {
            continue;
        }
        let e = relative_error(k, ks);
        if e >= eps {
            let k0 = match prev {
                Some((kp, ep)) if e > ep => kp + (eps - ep) / (e - ep) * (k - kp),
                _ => k,
            };
            return Ok(k0 / PI);
        }
        prev = Some((k, e));
    }
    Ok(1.0)
}

/// As [`resolving_efficiency`] for a symbol function, refining the first
/// crossing by bisection to `1e−9` in `k`.
pub fn resolving_efficiency_fn(f: impl Fn(f64) -> f64, eps: f64, samples: usize) -> Result<f64> {
    check_eps(eps)?;
    if samples < 2 {
        return Err(Error::InvalidInput("need at least two wavenumber samples".into()));
    }
    let bad = |k: f64| relative_error(k, f(k)) >= eps;
    let mut prev = 0.0;
    for k in wavenumbers(samples).skip(1) {
        if bad(k) {
            let (mut lo, mut hi) = (prev, k);
            while hi - lo > 1e-9 {
                let mid = 0.5 * (lo + hi);
                if mid > 0.0 && bad(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(hi / PI);
        }
        prev = k;
    }
    Ok(1.0)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("tolerance must lie in (0, 1), got {eps}")))
    }
}

/// `ν''_s = −ν (k* + k²)/k²`.
pub fn spectral_viscosity(kstar: f64, nu: f64, k: f64) -> Result<f64> {
    if k <= 0.0 {
        return Err(Error::InvalidInput("spectral viscosity needs k > 0".into()));
    }
    Ok(-nu * (kstar + k * k) / (k * k))
}

/// `Re_eq = L u / (ν + ν''_s) = −L u k² / (ν k*)`; `None` when `k* = 0`
/// (the mode is not damped at all).
pub fn equivalent_reynolds(kstar: f64, l: f64, u: f64, nu: f64, k: f64) -> Result<Option<f64>> {
    if k <= 0.0 || k > PI + 1e-12 {
        return Err(Error::InvalidInput(format!("wavenumber {k} outside (0, π]")));
    }
    if kstar.abs() < 1e-12 {
        return Ok(None);
    }
    Ok(Some(-l * u * k * k / (nu * kstar)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_curve_resolves_everything() {
        let c = SpectralCurve::exact(TermKind::Straight, 512);
        assert_eq!(resolving_efficiency(&c, 0.05).unwrap(), 1.0);
        assert_eq!(resolving_efficiency_fn(|k| -k * k, 0.05, 512).unwrap(), 1.0);
    }

    #[test]
    fn empty_curve_rejected() {
        let c = SpectralCurve {
            scheme: None,
            kind: TermKind::Straight,
            samples: vec![],
        };
        assert!(resolving_efficiency(&c, 0.05).is_err());
    }

    #[test]
    fn second_order_central_symbol() {
        // 2(cos k − 1)
        let s = Symbol::from_weights(
            "me4-base".parse().unwrap(),
            &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        );
        for k in [0.1, 1.0, 3.0] {
            assert!((s.eval(k) - 2.0 * (k.cos() - 1.0)).abs() < 1e-14);
        }
        assert!((s.amplification_bound(4097).1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_viscosity_and_reynolds_of_exact_symbol() {
        for k in [0.3, 1.0, PI] {
            assert_eq!(spectral_viscosity(-k * k, 0.7, k).unwrap(), 0.0);
            let re = equivalent_reynolds(-k * k, 2.0, 3.0, 0.5, k).unwrap().unwrap();
            assert!((re - 12.0).abs() < 1e-12);
        }
        assert!(spectral_viscosity(0.0, 1.0, 0.0).is_err());
        assert_eq!(equivalent_reynolds(0.0, 1.0, 1.0, 1.0, PI).unwrap(), None);
    }
}
