//! Reference discretizations used for comparison: successive application of
//! a central first derivative, and the second-order α-damping flux.

use super::{check_len, ghost_fill, Field1D, InterfaceViscosity};
use crate::coeffs::central_first;
use crate::exact;
use crate::{Error, Result};

/// `D1(μ D1 φ)` with the central first derivative `d` (weights `d_1..d_n`).
pub(super) fn visbal_line(d: &[f64], phi: &[f64], mu: &[f64], ghost: usize, dx: f64, out: &mut [f64]) {
    let n = d.len();
    let len = phi.len();
    // flux μ φ' on every node that has a full stencil
    let mut h = vec![0.0; len];
    for k in n..len - n {
        let mut s = 0.0;
        for (p, w) in d.iter().enumerate() {
            s += w * (phi[k + p + 1] - phi[k - p - 1]);
        }
        h[k] = mu[k] * s / dx;
    }
    for (i, o) in out.iter_mut().enumerate() {
        let j = i + ghost;
        let mut s = 0.0;
        for (p, w) in d.iter().enumerate() {
            s += w * (h[j + p + 1] - h[j - p - 1]);
        }
        *o = s / dx;
    }
}

pub(super) fn nishikawa_line(
    alpha: f64,
    iv: InterfaceViscosity,
    phi: &[f64],
    mu: &[f64],
    ghost: usize,
    dx: f64,
    out: &mut [f64],
) {
    let grad = |k: usize| (phi[k + 1] - phi[k - 1]) / (2.0 * dx);
    let flux = |k: usize| {
        // interface k + 1/2
        let (gl, gr) = (grad(k), grad(k + 1));
        let pl = phi[k] + 0.5 * dx * gl;
        let pr = phi[k + 1] - 0.5 * dx * gr;
        let nu = match iv {
            InterfaceViscosity::Average => 0.5 * (mu[k] + mu[k + 1]),
            InterfaceViscosity::Fourth => {
                (9.0 * (mu[k] + mu[k + 1]) - (mu[k - 1] + mu[k + 2])) / 16.0
            }
        };
        nu * (0.5 * (gl + gr) + alpha / (2.0 * dx) * (pr - pl))
    };
    for (i, o) in out.iter_mut().enumerate() {
        let j = i + ghost;
        *o = (flux(j) - flux(j - 1)) / dx;
    }
}

/// Successive central first derivatives, `∂x(μ ∂xφ) ≈ D1(μ D1 φ)`, of the
/// given order (2, 4 or 6).
pub fn visbal_successive_d2(phi: &Field1D, mu: &Field1D, order: u32) -> Result<Vec<f64>> {
    let d: Vec<f64> = central_first(order)?.iter().map(exact::to_f64).collect();
    if phi.values.len() != mu.values.len() {
        return Err(Error::Shape("viscosity and operand lengths differ".into()));
    }
    let g = 2 * d.len();
    check_len(phi.values.len(), g + 1)?;
    let pe = ghost_fill(&phi.values, g, phi.fill)?;
    let me = ghost_fill(&mu.values, g, mu.fill)?;
    let mut out = vec![0.0; phi.values.len()];
    visbal_line(&d, &pe, &me, g, phi.dx, &mut out);
    Ok(out)
}

/// Second-order α-damping scheme with interface viscosity `iv`.
pub fn nishikawa_alpha_d2(
    phi: &Field1D,
    mu: &Field1D,
    alpha: f64,
    iv: InterfaceViscosity,
) -> Result<Vec<f64>> {
    if phi.values.len() != mu.values.len() {
        return Err(Error::Shape("viscosity and operand lengths differ".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("alpha must be finite, got {alpha}")));
    }
    check_len(phi.values.len(), 5)?;
    let pe = ghost_fill(&phi.values, 2, phi.fill)?;
    let me = ghost_fill(&mu.values, 2, mu.fill)?;
    let mut out = vec![0.0; phi.values.len()];
    nishikawa_line(alpha, iv, &pe, &me, 2, phi.dx, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_damping_kills_odd_even_mode() {
        // (−1)^j: central gradients vanish, so only the damping term acts:
        // φ_R − φ_L = φ_{j+1} − φ_j = ±2, giving −2α/Δx² (−1)^j.
        let n = 16;
        let dx = 0.1;
        let phi = Field1D::periodic((0..n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect(), dx).unwrap();
        let mu = Field1D::periodic(vec![1.0; n], dx).unwrap();
        let out = nishikawa_alpha_d2(&phi, &mu, 8.0 / 3.0, InterfaceViscosity::Average).unwrap();
        for (j, v) in out.iter().enumerate() {
            let expect = -2.0 * (8.0 / 3.0) / (dx * dx) * phi.values[j];
            assert!((v - expect).abs() < 1e-9, "{v} vs {expect}");
        }
    }

    #[test]
    fn successive_derivative_is_blind_to_odd_even() {
        let n = 16;
        let phi = Field1D::periodic((0..n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect(), 0.1).unwrap();
        let mu = Field1D::periodic(vec![1.0; n], 0.1).unwrap();
        for order in [2, 4, 6] {
            let out = visbal_successive_d2(&phi, &mu, order).unwrap();
            assert!(out.iter().all(|v| v.abs() < 1e-9));
        }
    }
}
