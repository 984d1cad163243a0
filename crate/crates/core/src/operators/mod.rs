//! Assembly and application of the nonlinear second-derivative operators.
//!
//! All kernels work on *padded* lines: arrays carrying `ghost` extra values
//! on each side, with the interior at indices `ghost..ghost + n`. The
//! convenience wrappers taking [`Field1D`]/[`Field2D`] fill the ghosts from a
//! [`FillPolicy`]; the `*_padded` entry points let callers supply ghosts
//! directly (e.g. from an analytic function).
//!
//! Straight term at node `j`:
//!
//! ```text
//! ∂x(μ ∂xφ)_j ≈ 1/Δx Σ_ℓ o_ℓ [ μ_{+ℓ} (∂xφ)_{+ℓ} − μ_{−ℓ} (∂xφ)_{−ℓ} ]
//! ```
//!
//! with `ℓ = 1/2, 3/2[, 5/2]`, `o_ℓ = a*, b*/3, c*/5`, midpoint derivatives
//! from the scheme's [`MidpointStencil`](crate::coeffs::MidpointStencil)s and
//! midpoint viscosity from its interpolation rows. The mixed term replaces the
//! midpoint derivative by an interpolation of the nodal inner derivative plus
//! (for the optimized schemes) the filter penalty `Σ_p F_p φ_{j+p} / Δx`.

mod ghost;
mod reference;

pub use ghost::{fill_in_place, ghost_fill, FillPolicy};
pub use reference::{nishikawa_alpha_d2, visbal_successive_d2};

use serde::{Deserialize, Serialize};

use crate::coeffs::{self, catalog, SchemeId, TermKind, Variant};
use crate::exact;
use crate::{Error, Result};

/// Sign applied to the filter penalty at the negative half-node locations.
///
/// `Antisymmetric` treats the penalty like the derivative it corrects, i.e.
/// mirrors it with a sign change (`−Σ F_p φ_{j−p}` at `−ℓ`); the resulting
/// operator damps the odd-even mode even for constant viscosity.
/// `Symmetric` adds `+Σ F_p φ_{j−p}` at both `±ℓ`, which cancels in the flux
/// difference whenever the viscosity is constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FilterPenaltySign {
    #[default]
    Antisymmetric,
    Symmetric,
}

/// Interface viscosity used by the α-damping reference scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum InterfaceViscosity {
    /// `(μ_j + μ_{j+1}) / 2`
    #[default]
    Average,
    /// `9/16 (μ_j + μ_{j+1}) − 1/16 (μ_{j−1} + μ_{j+2})`
    Fourth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorOptions {
    pub penalty: FilterPenaltySign,
    pub alpha: f64,
    pub interface_viscosity: InterfaceViscosity,
}

impl Default for OperatorOptions {
    fn default() -> Self {
        Self {
            penalty: FilterPenaltySign::default(),
            alpha: 8.0 / 3.0,
            interface_viscosity: InterfaceViscosity::default(),
        }
    }
}

#[derive(Debug, Clone)]
struct Taps {
    off: Vec<isize>,
    w: Vec<f64>,
}

impl Taps {
    fn new(offsets: &[i32], w: Vec<f64>) -> Self {
        Self {
            off: offsets.iter().map(|&p| p as isize).collect(),
            w,
        }
    }

    fn mirrored(&self, sign: f64) -> Self {
        Self {
            off: self.off.iter().map(|p| -p).collect(),
            w: self.w.iter().map(|w| sign * w).collect(),
        }
    }

    /// `out[i] = Σ w a[ghost + i + o]` for every interior index at once.
    fn apply_line(&self, a: &[f64], ghost: usize, out: &mut [f64]) {
        out.fill(0.0);
        let n = out.len();
        for (o, w) in self.off.iter().zip(&self.w) {
            let src = &a[(ghost as isize + o) as usize..][..n];
            for (x, y) in out.iter_mut().zip(src) {
                *x += w * y;
            }
        }
    }

    fn reach(&self) -> usize {
        self.off.iter().map(|p| p.unsigned_abs()).max().unwrap_or(0)
    }

    fn sum(&self) -> f64 {
        self.w.iter().sum()
    }

    /// `Σ c_k T_k` merged into one stencil.
    fn combine(parts: &[(f64, &Taps)]) -> Self {
        let mut m = std::collections::BTreeMap::new();
        for (c, t) in parts {
            for (o, w) in t.off.iter().zip(&t.w) {
                *m.entry(*o).or_insert(0.0) += c * w;
            }
        }
        Self {
            off: m.keys().copied().collect(),
            w: m.values().copied().collect(),
        }
    }
}

/// The midpoint operators collapsed for a constant viscosity `μ`:
/// straight `μ Σ o (s⁺D⁺ − s⁻D⁻)`, mixed `μ Σ o (s⁺(I⁺g + F⁺φ/Δx) − …)`,
/// where `s±` are the interpolation weight sums.
#[derive(Debug, Clone)]
struct Collapsed {
    d: Taps,
    g: Taps,
    f: Taps,
}

impl Collapsed {
    fn new(levels: &[Level]) -> Self {
        let mut d = Vec::new();
        let mut g = Vec::new();
        let mut f = Vec::new();
        for l in levels {
            let (sp, sm) = (l.o * l.i_plus.sum(), -l.o * l.i_minus.sum());
            d.push((sp, &l.d_plus));
            d.push((sm, &l.d_minus));
            g.push((sp, &l.i_plus));
            g.push((sm, &l.i_minus));
            if let (Some(fp), Some(fm)) = (&l.f_plus, &l.f_minus) {
                f.push((sp, fp));
                f.push((sm, fm));
            }
        }
        Self {
            d: Taps::combine(&d),
            g: Taps::combine(&g),
            f: Taps::combine(&f),
        }
    }
}

/// Whether every value of the line equals the first.
fn uniform(a: &[f64]) -> Option<f64> {
    let v = *a.first()?;
    a.iter().all(|x| *x == v).then_some(v)
}

#[derive(Debug, Clone)]
struct Level {
    o: f64,
    d_plus: Taps,
    d_minus: Taps,
    i_plus: Taps,
    i_minus: Taps,
    f_plus: Option<Taps>,
    f_minus: Option<Taps>,
}

#[derive(Debug, Clone)]
enum Kind {
    Midpoint(Vec<Level>, Collapsed),
    Visbal,
    Nishikawa { alpha: f64, iv: InterfaceViscosity },
}

/// A fully assembled straight/mixed operator with floating-point weights.
#[derive(Debug, Clone)]
pub struct ViscousOperator {
    scheme: SchemeId,
    kind: Kind,
    /// Central first-derivative weights `d_1..d_n` of the scheme order.
    first: Vec<f64>,
}

impl ViscousOperator {
    pub fn new(scheme: SchemeId) -> Result<Self> {
        Self::with_options(scheme, OperatorOptions::default())
    }

    pub fn with_options(scheme: SchemeId, opts: OperatorOptions) -> Result<Self> {
        let first: Vec<f64> = coeffs::central_first(scheme.order())?
            .iter()
            .map(exact::to_f64)
            .collect();
        let kind = match scheme.variant() {
            Variant::Base | Variant::Opti => {
                let c = catalog(scheme)?;
                let o = c.outer.level_weights_f64();
                let fsign = match opts.penalty {
                    FilterPenaltySign::Antisymmetric => -1.0,
                    FilterPenaltySign::Symmetric => 1.0,
                };
                let levels: Vec<Level> = c
                    .derivatives
                    .iter()
                    .zip(&c.interpolations)
                    .enumerate()
                    .map(|(lev, (d, i))| {
                        let d_plus = Taps::new(&d.offsets, d.weights_f64());
                        let i_plus = Taps::new(&i.offsets, i.interp_f64());
                        let f_plus = i
                            .has_filter()
                            .then(|| Taps::new(&i.offsets, i.filter_f64()));
                        Level {
                            o: o[lev],
                            d_minus: d_plus.mirrored(-1.0),
                            i_minus: i_plus.mirrored(1.0),
                            f_minus: f_plus.as_ref().map(|f| f.mirrored(fsign)),
                            d_plus,
                            i_plus,
                            f_plus,
                        }
                    })
                    .collect();
                let collapsed = Collapsed::new(&levels);
                Kind::Midpoint(levels, collapsed)
            }
            Variant::VisbalRef => Kind::Visbal,
            Variant::NishikawaRef => {
                if scheme.term() == TermKind::Mixed {
                    return Err(Error::InvalidScheme("alpha-damping has no mixed form".into()));
                }
                Kind::Nishikawa {
                    alpha: opts.alpha,
                    iv: opts.interface_viscosity,
                }
            }
        };
        Ok(Self {
            scheme,
            kind,
            first,
        })
    }

    pub fn scheme(&self) -> SchemeId {
        self.scheme
    }

    /// Ghost width the line kernels need along the operator axis.
    pub fn ghost_width(&self) -> usize {
        match &self.kind {
            Kind::Midpoint(levels, _) => levels
                .iter()
                .flat_map(|l| {
                    [
                        l.d_plus.reach(),
                        l.d_minus.reach(),
                        l.i_plus.reach(),
                        l.i_minus.reach(),
                        l.f_plus.as_ref().map_or(0, Taps::reach),
                    ]
                })
                .max()
                .unwrap_or(0),
            Kind::Visbal => 2 * self.first.len(),
            Kind::Nishikawa { .. } => 2,
        }
    }

    /// Ghost width the nodal inner derivative needs along the inner axis.
    pub fn inner_ghost_width(&self) -> usize {
        self.first.len()
    }

    /// `∂x(μ ∂xφ)` at the interior nodes of a padded line.
    pub fn straight_line(&self, phi: &[f64], mu: &[f64], ghost: usize, dx: f64, out: &mut [f64]) {
        let n = phi.len() - 2 * ghost;
        debug_assert!(ghost >= self.ghost_width() && mu.len() == phi.len() && out.len() == n);
        let idx2 = 1.0 / (dx * dx);
        match &self.kind {
            Kind::Midpoint(_, c) if uniform(mu).is_some() => {
                let m = uniform(mu).unwrap_or_default();
                c.d.apply_line(phi, ghost, out);
                out.iter_mut().for_each(|o| *o *= m * idx2);
            }
            Kind::Midpoint(levels, _) => {
                let mut buf = vec![0.0; 4 * n];
                let (ip, rest) = buf.split_at_mut(n);
                let (dp, rest) = rest.split_at_mut(n);
                let (im, dm) = rest.split_at_mut(n);
                out.fill(0.0);
                for l in levels {
                    l.i_plus.apply_line(mu, ghost, ip);
                    l.d_plus.apply_line(phi, ghost, dp);
                    l.i_minus.apply_line(mu, ghost, im);
                    l.d_minus.apply_line(phi, ghost, dm);
                    let c = l.o * idx2;
                    for i in 0..n {
                        out[i] += c * (ip[i] * dp[i] - im[i] * dm[i]);
                    }
                }
            }
            Kind::Visbal => reference::visbal_line(&self.first, phi, mu, ghost, dx, out),
            Kind::Nishikawa { alpha, iv } => {
                reference::nishikawa_line(*alpha, *iv, phi, mu, ghost, dx, out)
            }
        }
    }

    /// `∂x(μ ∂yφ)` at the interior nodes of a padded line along the outer
    /// axis `x`; `g` holds the nodal inner derivative `∂yφ` on the same line.
    pub fn mixed_line(
        &self,
        g: &[f64],
        phi: &[f64],
        mu: &[f64],
        ghost: usize,
        dx: f64,
        out: &mut [f64],
    ) {
        let n = phi.len() - 2 * ghost;
        debug_assert!(ghost >= self.ghost_width() && out.len() == n);
        let idx = 1.0 / dx;
        match &self.kind {
            Kind::Midpoint(_, c) if uniform(mu).is_some() => {
                let m = uniform(mu).unwrap_or_default();
                let mut t = vec![0.0; n];
                c.g.apply_line(g, ghost, out);
                c.f.apply_line(phi, ghost, &mut t);
                for (o, t) in out.iter_mut().zip(&t) {
                    *o = m * idx * (*o + t * idx);
                }
            }
            Kind::Midpoint(levels, _) => {
                let mut buf = vec![0.0; 5 * n];
                let (vp, rest) = buf.split_at_mut(n);
                let (vm, rest) = rest.split_at_mut(n);
                let (mp, rest) = rest.split_at_mut(n);
                let (mm, t) = rest.split_at_mut(n);
                out.fill(0.0);
                for l in levels {
                    l.i_plus.apply_line(g, ghost, vp);
                    l.i_minus.apply_line(g, ghost, vm);
                    if let (Some(fp), Some(fm)) = (&l.f_plus, &l.f_minus) {
                        fp.apply_line(phi, ghost, t);
                        for (v, f) in vp.iter_mut().zip(t.iter()) {
                            *v += f * idx;
                        }
                        fm.apply_line(phi, ghost, t);
                        for (v, f) in vm.iter_mut().zip(t.iter()) {
                            *v += f * idx;
                        }
                    }
                    l.i_plus.apply_line(mu, ghost, mp);
                    l.i_minus.apply_line(mu, ghost, mm);
                    let c = l.o * idx;
                    for i in 0..n {
                        out[i] += c * (mp[i] * vp[i] - mm[i] * vm[i]);
                    }
                }
            }
            Kind::Visbal => {
                for (i, o) in out.iter_mut().enumerate() {
                    let j = i + ghost;
                    let mut s = 0.0;
                    for (p, d) in self.first.iter().enumerate() {
                        let (a, b) = (j + p + 1, j - p - 1);
                        s += d * (mu[a] * g[a] - mu[b] * g[b]);
                    }
                    *o = s * idx;
                }
            }
            Kind::Nishikawa { .. } => unreachable!("rejected at construction"),
        }
    }

    /// Central first derivative of the scheme order at padded index `k`
    /// of a strided line: `Σ d_p (a[k+p·s] − a[k−p·s]) / dx`.
    #[inline]
    pub fn first_derivative_at(&self, a: &[f64], k: usize, stride: usize, dx: f64) -> f64 {
        let mut s = 0.0;
        for (p, d) in self.first.iter().enumerate() {
            let o = (p + 1) * stride;
            s += d * (a[k + o] - a[k - o]);
        }
        s / dx
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    pub values: Vec<f64>,
    pub dx: f64,
    pub fill: FillPolicy,
}

impl Field1D {
    pub fn new(values: Vec<f64>, dx: f64, fill: FillPolicy) -> Result<Self> {
        if dx.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidInput(format!("spacing must be positive, got {dx}")));
        }
        Ok(Self { values, dx, fill })
    }

    pub fn periodic(values: Vec<f64>, dx: f64) -> Result<Self> {
        Self::new(values, dx, FillPolicy::Periodic)
    }
}

fn check_len(n: usize, needed: usize) -> Result<()> {
    if n < needed {
        Err(Error::FieldTooShort { len: n, needed })
    } else {
        Ok(())
    }
}

/// `∂x(μ ∂xφ)` on a 1D field with the default operator options.
pub fn straight_d2(phi: &Field1D, mu: &Field1D, scheme: SchemeId) -> Result<Vec<f64>> {
    if scheme.term() != TermKind::Straight {
        return Err(Error::InvalidScheme(format!("{scheme} is not a straight scheme")));
    }
    straight_d2_with(&ViscousOperator::new(scheme)?, phi, mu)
}

pub fn straight_d2_with(op: &ViscousOperator, phi: &Field1D, mu: &Field1D) -> Result<Vec<f64>> {
    if phi.values.len() != mu.values.len() {
        return Err(Error::Shape("viscosity and operand lengths differ".into()));
    }
    let g = op.ghost_width();
    check_len(phi.values.len(), 2 * g + 1)?;
    let pe = ghost_fill(&phi.values, g, phi.fill)?;
    let me = ghost_fill(&mu.values, g, mu.fill)?;
    straight_d2_padded(op, &pe, &me, g, phi.dx)
}

pub fn straight_d2_padded(
    op: &ViscousOperator,
    phi: &[f64],
    mu: &[f64],
    ghost: usize,
    dx: f64,
) -> Result<Vec<f64>> {
    if ghost < op.ghost_width() {
        return Err(Error::InvalidInput(format!(
            "ghost width {ghost} below the required {}",
            op.ghost_width()
        )));
    }
    if phi.len() != mu.len() || phi.len() < 2 * ghost + 1 {
        return Err(Error::Shape("padded line lengths".into()));
    }
    let mut out = vec![0.0; phi.len() - 2 * ghost];
    op.straight_line(phi, mu, ghost, dx, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// A 2D array with `g` ghost layers on every side, stored x-major:
/// `(i, j)` with `i ∈ [−g, nx+g)`, `j ∈ [−g, ny+g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Padded2D {
    pub nx: usize,
    pub ny: usize,
    pub g: usize,
    pub data: Vec<f64>,
}

impl Padded2D {
    pub fn zeros(nx: usize, ny: usize, g: usize) -> Self {
        Self {
            nx,
            ny,
            g,
            data: vec![0.0; (nx + 2 * g) * (ny + 2 * g)],
        }
    }

    /// Samples `f(i, j)` over the whole padded index range.
    pub fn from_fn(nx: usize, ny: usize, g: usize, f: impl Fn(isize, isize) -> f64) -> Self {
        let mut p = Self::zeros(nx, ny, g);
        let gi = g as isize;
        for i in -gi..(nx as isize + gi) {
            for j in -gi..(ny as isize + gi) {
                let k = p.idx(i, j);
                p.data[k] = f(i, j);
            }
        }
        p
    }

    /// Copies interior values (x-major `nx × ny`) and fills ghosts, first
    /// along x for every interior row, then along y for every column.
    pub fn from_interior(
        values: &[f64],
        nx: usize,
        ny: usize,
        g: usize,
        fill: [FillPolicy; 2],
    ) -> Result<Self> {
        if values.len() != nx * ny {
            return Err(Error::Shape(format!("{} values for {nx}x{ny}", values.len())));
        }
        let mut p = Self::zeros(nx, ny, g);
        for i in 0..nx {
            for j in 0..ny {
                let k = p.idx(i as isize, j as isize);
                p.data[k] = values[i * ny + j];
            }
        }
        p.fill_ghosts(fill)?;
        Ok(p)
    }

    pub fn fill_ghosts(&mut self, fill: [FillPolicy; 2]) -> Result<()> {
        let (nx, ny, g) = (self.nx, self.ny, self.g);
        let mut line = vec![0.0; nx + 2 * g];
        for j in 0..ny as isize {
            for (k, v) in line.iter_mut().enumerate() {
                *v = self.data[self.idx(k as isize - g as isize, j)];
            }
            fill_in_place(&mut line, g, fill[0])?;
            for (k, v) in line.iter().enumerate() {
                let id = self.idx(k as isize - g as isize, j);
                self.data[id] = *v;
            }
        }
        let w = ny + 2 * g;
        for i in 0..(nx + 2 * g) {
            fill_in_place(&mut self.data[i * w..(i + 1) * w], g, fill[1])?;
        }
        Ok(())
    }

    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let w = self.ny + 2 * self.g;
        ((i + self.g as isize) as usize) * w + (j + self.g as isize) as usize
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> f64 {
        self.data[self.idx(i, j)]
    }

    /// Stride between neighbours along `axis`.
    pub fn stride(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.ny + 2 * self.g,
            Axis::Y => 1,
        }
    }

    pub fn interior(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for i in 0..self.nx as isize {
            for j in 0..self.ny as isize {
                out.push(self.at(i, j));
            }
        }
        out
    }

    /// The full padded line along `axis` through interior index `fixed` of
    /// the other axis.
    fn line(&self, axis: Axis, fixed: isize, buf: &mut Vec<f64>) {
        buf.clear();
        let g = self.g as isize;
        match axis {
            Axis::X => buf.extend((-g..self.nx as isize + g).map(|i| self.at(i, fixed))),
            Axis::Y => buf.extend((-g..self.ny as isize + g).map(|j| self.at(fixed, j))),
        }
    }
}

/// Uniform-grid scalar field in 2D, x-major storage `values[i * ny + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub values: Vec<f64>,
    pub fill: [FillPolicy; 2],
}

impl Field2D {
    pub fn from_fn(
        nx: usize,
        ny: usize,
        dx: f64,
        dy: f64,
        fill: [FillPolicy; 2],
        f: impl Fn(usize, usize) -> f64,
    ) -> Self {
        let mut values = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                values.push(f(i, j));
            }
        }
        Self {
            nx,
            ny,
            dx,
            dy,
            values,
            fill,
        }
    }

    fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.dx,
            Axis::Y => self.dy,
        }
    }
}

/// `∂_outer(μ ∂_inner φ)` on a 2D field.
pub fn mixed_d2(
    phi: &Field2D,
    mu: &Field2D,
    scheme: SchemeId,
    outer: Axis,
    inner: Axis,
) -> Result<Vec<f64>> {
    if outer == inner {
        return Err(Error::InvalidInput("outer and inner axes must differ".into()));
    }
    if scheme.term() != TermKind::Mixed {
        return Err(Error::InvalidScheme(format!("{scheme} is not a mixed scheme")));
    }
    if (phi.nx, phi.ny) != (mu.nx, mu.ny) {
        return Err(Error::Shape("viscosity and operand shapes differ".into()));
    }
    let op = ViscousOperator::new(scheme)?;
    let g = op.ghost_width().max(op.inner_ghost_width());
    check_len(phi.nx.min(phi.ny), 2 * g + 1)?;
    let p = Padded2D::from_interior(&phi.values, phi.nx, phi.ny, g, phi.fill)?;
    let m = Padded2D::from_interior(&mu.values, mu.nx, mu.ny, g, mu.fill)?;
    mixed_d2_padded(&op, &p, &m, outer, phi.spacing(outer), phi.spacing(inner))
}

/// Straight operator along `axis` on a padded 2D array; interior output
/// in x-major order.
pub fn straight_d2_2d_padded(
    op: &ViscousOperator,
    phi: &Padded2D,
    mu: &Padded2D,
    axis: Axis,
    d: f64,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; phi.nx * phi.ny];
    straight_d2_2d_accumulate(op, phi, mu, axis, d, 1.0, &mut out)?;
    Ok(out)
}

/// `out += scale · ∂_axis(μ ∂_axis φ)` on the interior (x-major).
pub fn straight_d2_2d_accumulate(
    op: &ViscousOperator,
    phi: &Padded2D,
    mu: &Padded2D,
    axis: Axis,
    d: f64,
    scale: f64,
    out: &mut [f64],
) -> Result<()> {
    let g = phi.g;
    if g < op.ghost_width() || mu.g != g || (mu.nx, mu.ny) != (phi.nx, phi.ny) {
        return Err(Error::Shape("padded arrays incompatible with operator".into()));
    }
    let (n_along, n_across) = match axis {
        Axis::X => (phi.nx, phi.ny),
        Axis::Y => (phi.ny, phi.nx),
    };
    let mut pl = Vec::new();
    let mut ml = Vec::new();
    let mut res = vec![0.0; n_along];
    for c in 0..n_across as isize {
        phi.line(axis, c, &mut pl);
        mu.line(axis, c, &mut ml);
        op.straight_line(&pl, &ml, g, d, &mut res);
        scatter_add(&res, axis, c as usize, phi.ny, scale, out);
    }
    Ok(())
}

fn scatter_add(res: &[f64], axis: Axis, c: usize, ny: usize, scale: f64, out: &mut [f64]) {
    match axis {
        Axis::X => {
            for (i, r) in res.iter().enumerate() {
                out[i * ny + c] += scale * r;
            }
        }
        Axis::Y => {
            for (j, r) in res.iter().enumerate() {
                out[c * ny + j] += scale * r;
            }
        }
    }
}

/// Mixed operator on padded arrays; interior output in x-major order.
pub fn mixed_d2_padded(
    op: &ViscousOperator,
    phi: &Padded2D,
    mu: &Padded2D,
    outer: Axis,
    d_outer: f64,
    d_inner: f64,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; phi.nx * phi.ny];
    mixed_d2_accumulate(op, phi, mu, outer, d_outer, d_inner, 1.0, &mut out)?;
    Ok(out)
}

/// `out += scale · ∂_outer(μ ∂_inner φ)` on the interior (x-major).
#[allow(clippy::too_many_arguments)]
pub fn mixed_d2_accumulate(
    op: &ViscousOperator,
    phi: &Padded2D,
    mu: &Padded2D,
    outer: Axis,
    d_outer: f64,
    d_inner: f64,
    scale: f64,
    out: &mut [f64],
) -> Result<()> {
    let g = phi.g;
    if g < op.ghost_width()
        || g < op.inner_ghost_width()
        || mu.g != g
        || (mu.nx, mu.ny) != (phi.nx, phi.ny)
    {
        return Err(Error::Shape("padded arrays incompatible with operator".into()));
    }
    let inner = match outer {
        Axis::X => Axis::Y,
        Axis::Y => Axis::X,
    };
    let stride = phi.stride(inner);
    let (n_along, n_across) = match outer {
        Axis::X => (phi.nx, phi.ny),
        Axis::Y => (phi.ny, phi.nx),
    };
    let gi = g as isize;
    let mut pl = Vec::new();
    let mut ml = Vec::new();
    let mut gl = vec![0.0; n_along + 2 * g];
    let mut res = vec![0.0; n_along];
    for c in 0..n_across as isize {
        phi.line(outer, c, &mut pl);
        mu.line(outer, c, &mut ml);
        for (k, gv) in gl.iter_mut().enumerate() {
            let a = k as isize - gi;
            let id = match outer {
                Axis::X => phi.idx(a, c),
                Axis::Y => phi.idx(c, a),
            };
            *gv = op.first_derivative_at(&phi.data, id, stride, d_inner);
        }
        op.mixed_line(&gl, &pl, &ml, g, d_outer, &mut res);
        scatter_add(&res, outer, c as usize, phi.ny, scale, out);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_viscosity_shortcut_matches_general_path() {
        for name in ["me4-base", "me4-opti", "me6-base", "me6-opti"] {
            let sid: SchemeId = name.parse().unwrap();
            for id in [sid, sid.with_term(TermKind::Mixed).unwrap()] {
                let op = ViscousOperator::new(id).unwrap();
                let gw = op.ghost_width() + 1;
                let n = 24;
                let phi: Vec<f64> = (0..n + 2 * gw).map(|k| (0.7 * k as f64).sin()).collect();
                let g: Vec<f64> = (0..n + 2 * gw).map(|k| (0.3 * k as f64).cos()).collect();
                let mu = vec![0.8; n + 2 * gw];
                // the outermost ghost is outside every stencil but defeats
                // the uniformity check
                let mut mu2 = mu.clone();
                mu2[0] = 5.0;
                let (mut a, mut b) = (vec![0.0; n], vec![0.0; n]);
                if id.term() == TermKind::Straight {
                    op.straight_line(&phi, &mu, gw, 0.1, &mut a);
                    op.straight_line(&phi, &mu2, gw, 0.1, &mut b);
                } else {
                    op.mixed_line(&g, &phi, &mu, gw, 0.1, &mut a);
                    op.mixed_line(&g, &phi, &mu2, gw, 0.1, &mut b);
                }
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-10 * (1.0 + y.abs()), "{id}: {x} vs {y}");
                }
            }
        }
    }

    fn quad_line(n: usize, g: usize, dx: f64) -> Vec<f64> {
        (0..n + 2 * g)
            .map(|k| {
                let x = (k as f64 - g as f64) * dx;
                x * x
            })
            .collect()
    }

    #[test]
    fn quadratic_gives_two_for_all_straight_schemes() {
        for s in ["me4-base", "me4-opti", "me6-base", "me6-opti", "visbal-e4", "visbal-e6", "nishikawa"] {
            let op = ViscousOperator::new(s.parse().unwrap()).unwrap();
            let g = op.ghost_width();
            let phi = quad_line(20, g, 0.1);
            let mu = vec![1.0; phi.len()];
            let out = straight_d2_padded(&op, &phi, &mu, g, 0.1).unwrap();
            for v in out {
                assert!((v - 2.0).abs() < 1e-10, "{s}: {v}");
            }
        }
    }

    #[test]
    fn ghost_width_is_checked() {
        let op = ViscousOperator::new("me6-opti".parse().unwrap()).unwrap();
        let phi = vec![0.0; 30];
        assert!(straight_d2_padded(&op, &phi, &phi, 2, 0.1).is_err());
    }

    #[test]
    fn short_field_rejected() {
        let phi = Field1D::periodic(vec![1.0; 5], 0.1).unwrap();
        let r = straight_d2(&phi, &phi, "me6-base".parse().unwrap());
        assert!(matches!(r, Err(Error::FieldTooShort { .. })));
    }

    #[test]
    fn bilinear_mixed_is_one() {
        for s in ["me4-base", "me4-opti", "me6-base", "me6-opti", "visbal-e4", "visbal-e6"] {
            let id: SchemeId = s.parse().unwrap();
            let id = id.with_term(TermKind::Mixed).unwrap();
            let op = ViscousOperator::new(id).unwrap();
            let g = op.ghost_width().max(op.inner_ghost_width());
            let h = 0.05;
            let phi = Padded2D::from_fn(12, 12, g, |i, j| (i as f64 * h) * (j as f64 * h));
            let mu = Padded2D::from_fn(12, 12, g, |_, _| 1.0);
            for outer in [Axis::X, Axis::Y] {
                let out = mixed_d2_padded(&op, &phi, &mu, outer, h, h).unwrap();
                assert!(out.iter().all(|v| (v - 1.0).abs() < 1e-10), "{s}");
            }
        }
    }
}
