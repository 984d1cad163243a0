use serde::{Deserialize, Serialize};

use mevisc::operators::FillPolicy;

use crate::{Error, Result};

pub const GAMMA: f64 = 1.4;

/// Number of conserved variables: ρ, ρu, ρv, ρE.
pub const NVAR: usize = 4;

/// Uniform node-centred grid; node `(i, j)` sits at `(x0 + i dx, y0 + j dy)`.
/// Storage is x-major: `k = i * ny + j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x0: f64,
    pub y0: f64,
    /// Ghost policy along x and y.
    pub fill: [FillPolicy; 2],
}

impl Grid {
    pub fn periodic_unit(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            dx: 1.0 / nx as f64,
            dy: 1.0 / ny as f64,
            x0: 0.0,
            y0: 0.0,
            fill: [FillPolicy::Periodic; 2],
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }
}

/// Reynolds, Mach and Prandtl numbers of the nondimensionalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowParams {
    pub re: f64,
    pub mach: f64,
    pub pr: f64,
}

impl FlowParams {
    pub fn new(re: f64, mach: f64) -> Self {
        Self { re, mach, pr: 0.72 }
    }

    /// `T = γ M² p / ρ`.
    #[inline]
    pub fn temperature(&self, rho: f64, p: f64) -> f64 {
        GAMMA * self.mach * self.mach * p / rho
    }
}

/// Primitive variables on the interior, x-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Primitives {
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
}

impl Primitives {
    pub fn sound_speed(&self) -> Vec<f64> {
        self.rho
            .iter()
            .zip(&self.p)
            .map(|(r, p)| (GAMMA * p / r).sqrt())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CnsState {
    pub grid: Grid,
    pub flow: FlowParams,
    /// `[ρ | ρu | ρv | ρE]`, each block `nx * ny` long.
    pub q: Vec<f64>,
    pub t: f64,
}

impl CnsState {
    /// Builds the state from `f(x, y) = [ρ, u, v, p]`.
    pub fn from_primitive(grid: Grid, flow: FlowParams, f: impl Fn(f64, f64) -> [f64; 4]) -> Self {
        let n = grid.len();
        let mut q = vec![0.0; NVAR * n];
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                let k = i * grid.ny + j;
                let [r, u, v, p] = f(grid.x(i), grid.y(j));
                let c = to_conserved(r, u, v, p);
                for (m, c) in c.iter().enumerate() {
                    q[m * n + k] = *c;
                }
            }
        }
        Self { grid, flow, q, t: 0.0 }
    }

    pub fn var(&self, m: usize) -> &[f64] {
        let n = self.grid.len();
        &self.q[m * n..(m + 1) * n]
    }

    pub fn primitives(&self) -> Primitives {
        primitives_of(&self.q, self.grid.len())
    }

    /// Rejects ρ ≤ 0, p ≤ 0 or non-finite values.
    pub fn check_physical(&self, step: usize) -> Result<()> {
        check_physical(&self.q, &self.grid, step)
    }

    /// `∫ ½ ρ (u² + v²) dA` over the grid.
    pub fn kinetic_energy(&self) -> f64 {
        let n = self.grid.len();
        let (r, mu, mv) = (&self.q[..n], &self.q[n..2 * n], &self.q[2 * n..3 * n]);
        let s: f64 = (0..n).map(|k| 0.5 * (mu[k] * mu[k] + mv[k] * mv[k]) / r[k]).sum();
        s * self.grid.cell_area()
    }

    /// Domain totals of the conserved variables.
    pub fn totals(&self) -> [f64; NVAR] {
        let mut t = [0.0; NVAR];
        for (m, t) in t.iter_mut().enumerate() {
            *t = self.var(m).iter().sum::<f64>() * self.grid.cell_area();
        }
        t
    }

    /// `ω = ∂v/∂x − ∂u/∂y` by 2nd-order central differences, one-sided at
    /// non-periodic edges (diagnostics only).
    pub fn vorticity(&self) -> Vec<f64> {
        let g = self.grid;
        let pr = self.primitives();
        let (nx, ny) = (g.nx, g.ny);
        let mut w = vec![0.0; g.len()];
        for i in 0..nx {
            let (il, ih, sx) = neighbours(i, nx, g.fill[0], g.dx);
            for j in 0..ny {
                let (jl, jh, sy) = neighbours(j, ny, g.fill[1], g.dy);
                let vx = (pr.v[ih * ny + j] - pr.v[il * ny + j]) / sx;
                let uy = (pr.u[i * ny + jh] - pr.u[i * ny + jl]) / sy;
                w[i * ny + j] = vx - uy;
            }
        }
        w
    }
}

fn neighbours(i: usize, n: usize, fill: FillPolicy, d: f64) -> (usize, usize, f64) {
    if matches!(fill, FillPolicy::Periodic) {
        return ((i + n - 1) % n, (i + 1) % n, 2.0 * d);
    }
    let lo = i.saturating_sub(1);
    let hi = (i + 1).min(n - 1);
    (lo, hi, (hi - lo) as f64 * d)
}

#[inline]
pub fn to_conserved(r: f64, u: f64, v: f64, p: f64) -> [f64; 4] {
    [r, r * u, r * v, p / (GAMMA - 1.0) + 0.5 * r * (u * u + v * v)]
}

#[inline]
pub fn pressure(r: f64, mu: f64, mv: f64, e: f64) -> f64 {
    (GAMMA - 1.0) * (e - 0.5 * (mu * mu + mv * mv) / r)
}

pub fn primitives_of(q: &[f64], n: usize) -> Primitives {
    let mut pr = Primitives {
        rho: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
        p: Vec::with_capacity(n),
    };
    for k in 0..n {
        let (r, mu, mv, e) = (q[k], q[n + k], q[2 * n + k], q[3 * n + k]);
        pr.rho.push(r);
        pr.u.push(mu / r);
        pr.v.push(mv / r);
        pr.p.push(pressure(r, mu, mv, e));
    }
    pr
}

pub(crate) fn check_physical(q: &[f64], grid: &Grid, step: usize) -> Result<()> {
    let n = grid.len();
    for k in 0..n {
        let (r, mu, mv, e) = (q[k], q[n + k], q[2 * n + k], q[3 * n + k]);
        let what = if !(r.is_finite() && mu.is_finite() && mv.is_finite() && e.is_finite()) {
            "non-finite state"
        } else if r <= 0.0 {
            "non-positive density"
        } else if pressure(r, mu, mv, e) <= 0.0 {
            "non-positive pressure"
        } else {
            continue;
        };
        return Err(Error::NonPhysical {
            step,
            i: k / grid.ny,
            j: k % grid.ny,
            what,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conserved_round_trip() {
        let g = Grid::periodic_unit(4, 3);
        let s = CnsState::from_primitive(g, FlowParams::new(100.0, 0.1), |x, y| {
            [1.0 + x, 0.3 - y, 0.2 * x, 2.0 + y]
        });
        let pr = s.primitives();
        for i in 0..4 {
            for j in 0..3 {
                let k = i * 3 + j;
                assert!((pr.rho[k] - (1.0 + g.x(i))).abs() < 1e-14);
                assert!((pr.p[k] - (2.0 + g.y(j))).abs() < 1e-13);
            }
        }
        s.check_physical(0).unwrap();
    }

    #[test]
    fn negative_pressure_is_located() {
        let g = Grid::periodic_unit(3, 3);
        let mut s = CnsState::from_primitive(g, FlowParams::new(1.0, 1.0), |_, _| [1.0, 0.0, 0.0, 1.0]);
        s.q[3 * 9 + 5] = -1.0;
        let e = s.check_physical(7).unwrap_err();
        assert!(matches!(e, Error::NonPhysical { step: 7, i: 1, j: 2, .. }), "{e}");
    }

    #[test]
    fn solid_body_rotation_vorticity() {
        let g = Grid::periodic_unit(8, 8);
        let s = CnsState::from_primitive(g, FlowParams::new(1.0, 1.0), |x, y| {
            let (sx, sy) = ((2.0 * std::f64::consts::PI * x).sin(), (2.0 * std::f64::consts::PI * y).sin());
            [1.0, sy, sx, 1.0]
        });
        let w = s.vorticity();
        assert!(w.iter().any(|w| w.abs() > 1.0));
    }
}
