//! Convective tendencies and the explicit low-pass filter.
//!
//! Two paths: nodal fluxes differentiated with the 7-point central scheme
//! (shear-layer cases, always paired with filtering), and WENO5-JS
//! reconstruction of primitive variables with the HLL flux (shock case).

use mevisc::operators::{Axis, FillPolicy, Padded2D};

use crate::state::{Grid, Primitives, GAMMA};
use crate::viscous::load;
use crate::Result;

/// 6th-order central first-derivative weights `d_1..d_3`.
const CENTRAL6: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];

/// `δ⁶` stencil `u_{j−3} … u_{j+3}`; its symbol is `−64 sin⁶(k/2)`.
const DELTA6: [f64; 7] = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];

const GHOST: usize = 3;

/// Central flux-derivative tendency `−∂x F − ∂y G`.
#[derive(Debug, Clone)]
pub struct CentralFlux {
    grid: Grid,
    /// Padded fluxes, 4 components per direction.
    f: Vec<Padded2D>,
    prim: [Padded2D; 4],
}

impl CentralFlux {
    pub fn new(grid: Grid) -> Self {
        let z = Padded2D::zeros(grid.nx, grid.ny, GHOST);
        Self {
            grid,
            f: vec![z.clone(); 4],
            prim: [z.clone(), z.clone(), z.clone(), z],
        }
    }

    pub fn accumulate(&mut self, prim: &Primitives, out: &mut [f64]) -> Result<()> {
        let grid = self.grid;
        let n = grid.len();
        for (pad, vals) in self.prim.iter_mut().zip([&prim.rho, &prim.u, &prim.v, &prim.p]) {
            load(pad, vals, grid.fill)?;
        }
        for (axis, d) in [(Axis::X, grid.dx), (Axis::Y, grid.dy)] {
            let [r, u, v, p] = &self.prim;
            for k in 0..r.data.len() {
                let (r, u, v, p) = (r.data[k], u.data[k], v.data[k], p.data[k]);
                let un = if axis == Axis::X { u } else { v };
                let e = p / (GAMMA - 1.0) + 0.5 * r * (u * u + v * v);
                self.f[0].data[k] = r * un;
                self.f[1].data[k] = r * u * un + if axis == Axis::X { p } else { 0.0 };
                self.f[2].data[k] = r * v * un + if axis == Axis::Y { p } else { 0.0 };
                self.f[3].data[k] = (e + p) * un;
            }
            let s = self.f[0].stride(axis);
            for (m, f) in self.f.iter().enumerate() {
                let o = &mut out[m * n..(m + 1) * n];
                for i in 0..grid.nx {
                    for j in 0..grid.ny {
                        let c = f.idx(i as isize, j as isize);
                        let mut acc = 0.0;
                        for (q, w) in CENTRAL6.iter().enumerate() {
                            let off = (q + 1) * s;
                            acc += w * (f.data[c + off] - f.data[c - off]);
                        }
                        o[i * grid.ny + j] -= acc / d;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `u ← u + σ δ⁶u / 64` along x then y for every conserved block of `q`;
/// the transfer function per axis is `1 − σ sin⁶(k/2)`.
pub fn filter6(q: &mut [f64], grid: &Grid, sigma: f64) -> Result<()> {
    let n = grid.len();
    let mut pad = Padded2D::zeros(grid.nx, grid.ny, GHOST);
    for block in q.chunks_mut(n) {
        for axis in [Axis::X, Axis::Y] {
            load(&mut pad, block, grid.fill)?;
            let s = pad.stride(axis);
            for i in 0..grid.nx {
                for j in 0..grid.ny {
                    let c = pad.idx(i as isize, j as isize);
                    let mut d6 = 0.0;
                    for (q, w) in DELTA6.iter().enumerate() {
                        d6 += w * pad.data[c + q * s - GHOST * s];
                    }
                    block[i * grid.ny + j] += sigma * d6 / 64.0;
                }
            }
        }
    }
    Ok(())
}

/// WENO5-JS value at `i+½` from `q_{i−2} … q_{i+2}`.
#[inline]
pub fn weno5(a: f64, b: f64, c: f64, d: f64, e: f64) -> f64 {
    const EPS: f64 = 1e-6;
    let p0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
    let p1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
    let p2 = (2.0 * c + 5.0 * d - e) / 6.0;
    let b0 = 13.0 / 12.0 * (a - 2.0 * b + c).powi(2) + 0.25 * (a - 4.0 * b + 3.0 * c).powi(2);
    let b1 = 13.0 / 12.0 * (b - 2.0 * c + d).powi(2) + 0.25 * (b - d).powi(2);
    let b2 = 13.0 / 12.0 * (c - 2.0 * d + e).powi(2) + 0.25 * (3.0 * c - 4.0 * d + e).powi(2);
    let a0 = 0.1 / (EPS + b0).powi(2);
    let a1 = 0.6 / (EPS + b1).powi(2);
    let a2 = 0.3 / (EPS + b2).powi(2);
    (a0 * p0 + a1 * p1 + a2 * p2) / (a0 + a1 + a2)
}

/// HLL flux for primitive states `[ρ, u_n, u_t, p]` in the face frame;
/// returns `[mass, normal momentum, tangential momentum, energy]`.
pub fn hll(l: [f64; 4], r: [f64; 4]) -> [f64; 4] {
    let state = |w: [f64; 4]| {
        let [rho, un, ut, p] = w;
        let e = p / (GAMMA - 1.0) + 0.5 * rho * (un * un + ut * ut);
        let u = [rho, rho * un, rho * ut, e];
        let f = [rho * un, rho * un * un + p, rho * un * ut, (e + p) * un];
        (u, f, (GAMMA * p / rho).sqrt())
    };
    let (ul, fl, cl) = state(l);
    let (ur, fr, cr) = state(r);
    let sl = (l[1] - cl).min(r[1] - cr);
    let sr = (l[1] + cl).max(r[1] + cr);
    if sl >= 0.0 {
        return fl;
    }
    if sr <= 0.0 {
        return fr;
    }
    let mut f = [0.0; 4];
    for m in 0..4 {
        f[m] = (sr * fl[m] - sl * fr[m] + sl * sr * (ur[m] - ul[m])) / (sr - sl);
    }
    f
}

/// Primitive-variable WENO5 + HLL tendency.
#[derive(Debug, Clone)]
pub struct WenoHll {
    grid: Grid,
    prim: [Padded2D; 4],
    /// Interfaces where the reconstruction produced ρ ≤ 0 or p ≤ 0 and the
    /// first-order states were used instead; cumulative.
    pub fallbacks: usize,
}

impl WenoHll {
    pub fn new(grid: Grid) -> Self {
        let z = Padded2D::zeros(grid.nx, grid.ny, GHOST);
        Self {
            grid,
            prim: [z.clone(), z.clone(), z.clone(), z],
            fallbacks: 0,
        }
    }

    pub fn accumulate(&mut self, prim: &Primitives, out: &mut [f64]) -> Result<()> {
        let grid = self.grid;
        let n = grid.len();
        for (pad, vals) in self.prim.iter_mut().zip([&prim.rho, &prim.u, &prim.v, &prim.p]) {
            load(pad, vals, grid.fill)?;
        }
        let mut flux = Vec::new();
        for axis in [Axis::X, Axis::Y] {
            let (n_along, n_across, d) = match axis {
                Axis::X => (grid.nx, grid.ny, grid.dx),
                Axis::Y => (grid.ny, grid.nx, grid.dy),
            };
            // normal / tangential velocity slots
            let (kn, kt) = if axis == Axis::X { (1, 2) } else { (2, 1) };
            let s = self.prim[0].stride(axis);
            for c in 0..n_across as isize {
                flux.clear();
                // interface a+½ for a = −1 … n_along−1
                for a in -1..n_along as isize {
                    let centre = match axis {
                        Axis::X => self.prim[0].idx(a, c),
                        Axis::Y => self.prim[0].idx(c, a),
                    };
                    let mut l = [0.0; 4];
                    let mut r = [0.0; 4];
                    for (slot, m) in [0, kn, kt, 3].into_iter().enumerate() {
                        let q = &self.prim[m].data;
                        let at = |o: isize| q[(centre as isize + o * s as isize) as usize];
                        l[slot] = weno5(at(-2), at(-1), at(0), at(1), at(2));
                        r[slot] = weno5(at(3), at(2), at(1), at(0), at(-1));
                    }
                    if !(l[0] > 0.0 && l[3] > 0.0 && r[0] > 0.0 && r[3] > 0.0) {
                        self.fallbacks += 1;
                        for (slot, m) in [0, kn, kt, 3].into_iter().enumerate() {
                            let q = &self.prim[m].data;
                            l[slot] = q[centre];
                            r[slot] = q[centre + s];
                        }
                    }
                    let f = hll(l, r);
                    let mut g = [0.0; 4];
                    g[0] = f[0];
                    g[kn] = f[1];
                    g[kt] = f[2];
                    g[3] = f[3];
                    flux.push(g);
                }
                for a in 0..n_along {
                    let k = match axis {
                        Axis::X => a * grid.ny + c as usize,
                        Axis::Y => c as usize * grid.ny + a,
                    };
                    for m in 0..4 {
                        out[m * n + k] -= (flux[a + 1][m] - flux[a][m]) / d;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Whether both axes are periodic; the central path is only conservative
/// there.
pub fn is_periodic(grid: &Grid) -> bool {
    grid.fill.iter().all(|f| matches!(f, FillPolicy::Periodic))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weno_reproduces_smooth_quadratic() {
        // cell averages of x² on unit cells centred at −2..2; the
        // interface value at ½ is 1/4
        let avg = |c: f64| c * c + 1.0 / 12.0;
        let v = weno5(avg(-2.0), avg(-1.0), avg(0.0), avg(1.0), avg(2.0));
        assert!((v - 0.25).abs() < 1e-6, "{v}");
    }

    #[test]
    fn hll_is_consistent() {
        let w = [1.3, 0.4, -0.2, 2.0];
        let f = hll(w, w);
        let e = 2.0 / 0.4 + 0.5 * 1.3 * (0.16 + 0.04);
        let exact = [1.3 * 0.4, 1.3 * 0.16 + 2.0, 1.3 * 0.4 * -0.2, (e + 2.0) * 0.4];
        for (a, b) in f.iter().zip(exact) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn filter_kills_checkerboard_at_full_strength() {
        let g = Grid::periodic_unit(8, 8);
        let mut q: Vec<f64> = (0..64).map(|k| if (k / 8 + k % 8) % 2 == 0 { 1.0 } else { -1.0 }).collect();
        filter6(&mut q, &g, 1.0).unwrap();
        assert!(q.iter().all(|v| v.abs() < 1e-10));
    }
}
