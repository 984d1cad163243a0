//! Viscous tendency `(1/Re)(∂x F^v + ∂y G^v)`.
//!
//! Every viscous flux component has the form `Σ μ_eff ∂φ`, so each
//! contribution is one straight or mixed operator call:
//!
//! * `τxx = μ(4/3 u_x − 2/3 v_y)`, `τyy = μ(4/3 v_y − 2/3 u_x)`,
//!   `τxy = μ(u_y + v_x)`;
//! * the work terms `u τxx + v τxy` etc. reuse the same derivatives with the
//!   effective diffusivities `μu` and `μv`;
//! * the heat flux `κ T_x` is a straight term with `κ = μ/(M²(γ−1)Pr)`.

use serde::{Deserialize, Serialize};

use mevisc::operators::{
    mixed_d2_accumulate, straight_d2_2d_accumulate, Axis, FillPolicy, OperatorOptions, Padded2D,
    ViscousOperator,
};
use mevisc::{SchemeId, TermKind, Variant};

use crate::state::{FlowParams, Grid, Primitives, GAMMA};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ViscosityLaw {
    Constant(f64),
    /// `μ = T^{3/2} (1 + S) / (T + S)` with `S = 110.4 K / T_ref`.
    Sutherland { s: f64 },
}

impl ViscosityLaw {
    /// Sutherland's law for air referenced to 293 K.
    pub fn sutherland_air() -> Self {
        Self::Sutherland { s: 110.4 / 293.0 }
    }

    #[inline]
    pub fn mu(&self, t: f64) -> f64 {
        match *self {
            Self::Constant(m) => m,
            Self::Sutherland { s } => t * t.sqrt() * (1.0 + s) / (t + s),
        }
    }
}

impl Default for ViscosityLaw {
    fn default() -> Self {
        Self::Constant(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViscousModel {
    /// Straight scheme; the mixed terms use the same order and variant.
    pub scheme: SchemeId,
    #[serde(default)]
    pub law: ViscosityLaw,
    #[serde(default)]
    pub options: OperatorOptions,
}

impl ViscousModel {
    pub fn new(scheme: SchemeId) -> Self {
        Self {
            scheme,
            law: ViscosityLaw::default(),
            options: OperatorOptions::default(),
        }
    }

    /// Largest diffusivity `μ/(Re ρ) · max(4/3, γ/Pr)` per cell, for the
    /// time-step bound.
    pub fn diffusivity(&self, prim: &Primitives, flow: &FlowParams) -> Vec<f64> {
        let f = (4.0_f64 / 3.0).max(GAMMA / flow.pr) / flow.re;
        prim.rho
            .iter()
            .zip(&prim.p)
            .map(|(r, p)| f * self.law.mu(flow.temperature(*r, *p)) / r)
            .collect()
    }
}

/// Operators and scratch arrays for repeated evaluation on one grid.
#[derive(Debug, Clone)]
pub struct ViscousResidual {
    model: ViscousModel,
    straight: ViscousOperator,
    mixed: ViscousOperator,
    grid: Grid,
    u: Padded2D,
    v: Padded2D,
    t: Padded2D,
    mu: Padded2D,
    mu_u: Padded2D,
    mu_v: Padded2D,
}

impl ViscousResidual {
    pub fn new(model: ViscousModel, grid: Grid) -> Result<Self> {
        if model.scheme.term() != TermKind::Straight {
            return Err(Error::Config("viscous scheme must be given by its straight form".into()));
        }
        if model.scheme.variant() == Variant::NishikawaRef {
            return Err(Error::Config(
                "the alpha-damping scheme has no mixed form and cannot drive the full viscous terms"
                    .into(),
            ));
        }
        let straight = ViscousOperator::with_options(model.scheme, model.options)?;
        let mixed =
            ViscousOperator::with_options(model.scheme.with_term(TermKind::Mixed)?, model.options)?;
        let g = straight
            .ghost_width()
            .max(mixed.ghost_width())
            .max(mixed.inner_ghost_width());
        if grid.nx.min(grid.ny) < 2 * g + 1 {
            return Err(Error::Config(format!(
                "grid {}x{} too small for {} (ghost width {g})",
                grid.nx, grid.ny, model.scheme
            )));
        }
        let z = Padded2D::zeros(grid.nx, grid.ny, g);
        Ok(Self {
            model,
            straight,
            mixed,
            grid,
            u: z.clone(),
            v: z.clone(),
            t: z.clone(),
            mu: z.clone(),
            mu_u: z.clone(),
            mu_v: z,
        })
    }

    pub fn model(&self) -> &ViscousModel {
        &self.model
    }

    pub fn ghost_width(&self) -> usize {
        self.u.g
    }

    /// Adds the viscous tendency of the momentum and energy equations to
    /// `out = [ρ | ρu | ρv | ρE]` tendencies.
    pub fn accumulate(&mut self, prim: &Primitives, flow: &FlowParams, out: &mut [f64]) -> Result<()> {
        let grid = self.grid;
        let n = grid.len();
        if prim.rho.len() != n || out.len() != 4 * n {
            return Err(Error::Config("state size does not match the grid".into()));
        }
        let law = self.model.law;
        let fill = grid.fill;
        load(&mut self.u, &prim.u, fill)?;
        load(&mut self.v, &prim.v, fill)?;
        let temp: Vec<f64> = prim
            .rho
            .iter()
            .zip(&prim.p)
            .map(|(r, p)| flow.temperature(*r, *p))
            .collect();
        load(&mut self.t, &temp, fill)?;
        // μ and its products are formed on the padded arrays so that ghost
        // values stay consistent with the ghost velocities.
        for k in 0..self.mu.data.len() {
            let m = law.mu(self.t.data[k]);
            self.mu.data[k] = m;
            self.mu_u.data[k] = m * self.u.data[k];
            self.mu_v.data[k] = m * self.v.data[k];
        }

        let ire = 1.0 / flow.re;
        let ck = 1.0 / (flow.mach * flow.mach * (GAMMA - 1.0) * flow.pr);
        let (dx, dy) = (grid.dx, grid.dy);
        let (_, rest) = out.split_at_mut(n);
        let (mx, rest) = rest.split_at_mut(n);
        let (my, en) = rest.split_at_mut(n);
        let (s, m) = (&self.straight, &self.mixed);
        let (u, v, t) = (&self.u, &self.v, &self.t);
        let (mu, mu_u, mu_v) = (&self.mu, &self.mu_u, &self.mu_v);
        let f43 = 4.0 / 3.0 * ire;
        let f23 = -2.0 / 3.0 * ire;

        // x-momentum: ∂x τxx + ∂y τxy
        straight_d2_2d_accumulate(s, u, mu, Axis::X, dx, f43, mx)?;
        mixed_d2_accumulate(m, v, mu, Axis::X, dx, dy, f23, mx)?;
        straight_d2_2d_accumulate(s, u, mu, Axis::Y, dy, ire, mx)?;
        mixed_d2_accumulate(m, v, mu, Axis::Y, dy, dx, ire, mx)?;
        // y-momentum: ∂x τxy + ∂y τyy
        straight_d2_2d_accumulate(s, v, mu, Axis::X, dx, ire, my)?;
        mixed_d2_accumulate(m, u, mu, Axis::X, dx, dy, ire, my)?;
        straight_d2_2d_accumulate(s, v, mu, Axis::Y, dy, f43, my)?;
        mixed_d2_accumulate(m, u, mu, Axis::Y, dy, dx, f23, my)?;
        // energy, x: ∂x(u τxx + v τxy + κ T_x)
        straight_d2_2d_accumulate(s, u, mu_u, Axis::X, dx, f43, en)?;
        mixed_d2_accumulate(m, v, mu_u, Axis::X, dx, dy, f23, en)?;
        mixed_d2_accumulate(m, u, mu_v, Axis::X, dx, dy, ire, en)?;
        straight_d2_2d_accumulate(s, v, mu_v, Axis::X, dx, ire, en)?;
        straight_d2_2d_accumulate(s, t, mu, Axis::X, dx, ck * ire, en)?;
        // energy, y: ∂y(u τxy + v τyy + κ T_y)
        straight_d2_2d_accumulate(s, u, mu_u, Axis::Y, dy, ire, en)?;
        mixed_d2_accumulate(m, v, mu_u, Axis::Y, dy, dx, ire, en)?;
        straight_d2_2d_accumulate(s, v, mu_v, Axis::Y, dy, f43, en)?;
        mixed_d2_accumulate(m, u, mu_v, Axis::Y, dy, dx, f23, en)?;
        straight_d2_2d_accumulate(s, t, mu, Axis::Y, dy, ck * ire, en)?;
        Ok(())
    }
}

/// Copies an interior field into a padded array and fills its ghosts.
pub(crate) fn load(p: &mut Padded2D, values: &[f64], fill: [FillPolicy; 2]) -> Result<()> {
    let ny = p.ny;
    for i in 0..p.nx {
        let k0 = p.idx(i as isize, 0);
        p.data[k0..k0 + ny].copy_from_slice(&values[i * ny..(i + 1) * ny]);
    }
    p.fill_ghosts(fill)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::CnsState;

    #[test]
    fn uniform_state_has_no_viscous_tendency() {
        let g = Grid::periodic_unit(16, 16);
        let flow = FlowParams::new(100.0, 0.3);
        let s = CnsState::from_primitive(g, flow, |_, _| [1.2, 0.4, -0.1, 2.0]);
        for name in ["me4-opti", "me6-base", "visbal-e4"] {
            let mut r = ViscousResidual::new(ViscousModel::new(name.parse().unwrap()), g).unwrap();
            let mut out = vec![0.0; 4 * g.len()];
            r.accumulate(&s.primitives(), &flow, &mut out).unwrap();
            assert!(out.iter().all(|x| x.abs() < 1e-9), "{name}");
        }
    }

    #[test]
    fn alpha_damping_is_rejected() {
        let g = Grid::periodic_unit(16, 16);
        assert!(ViscousResidual::new(ViscousModel::new("nishikawa".parse().unwrap()), g).is_err());
    }

    #[test]
    fn sutherland_is_one_at_reference() {
        assert!((ViscosityLaw::sutherland_air().mu(1.0) - 1.0).abs() < 1e-15);
        assert!(ViscosityLaw::sutherland_air().mu(2.0) > 1.0);
    }
}
