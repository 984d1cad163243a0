//! Scalar diagnostics for the benchmark comparisons.

use serde::{Deserialize, Serialize};

use crate::state::CnsState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeSample {
    pub t: f64,
    pub ke: f64,
}

/// `ε_KE = −d(KE)/dt` by second-order differences on a possibly
/// non-uniform time series (one-sided at the ends).
pub fn ke_dissipation(history: &[KeSample]) -> Vec<(f64, f64)> {
    let n = history.len();
    if n < 2 {
        return Vec::new();
    }
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                i if i == n - 1 => (n - 2, n - 1),
                i => (i - 1, i + 1),
            };
            let d = (history[b].ke - history[a].ke) / (history[b].t - history[a].t);
            (history[i].t, -d)
        })
        .collect()
}

/// `∫ ω² dA` over the whole grid.
pub fn enstrophy(state: &CnsState) -> f64 {
    state.vorticity().iter().map(|w| w * w).sum::<f64>() * state.grid.cell_area()
}

/// Enstrophy in the braid regions of the two shear layers of the periodic
/// shear-layer case.
///
/// Each layer occupies one half of the domain in `y`. The main roll-up is
/// located as the column of largest `∫ω² dy` in that half; the braid window
/// is the quarter of the period centred half a period away from it.
pub fn braid_enstrophy(state: &CnsState) -> f64 {
    let g = state.grid;
    let w = state.vorticity();
    let (nx, ny) = (g.nx, g.ny);
    let mut total = 0.0;
    for half in [0..ny / 2, ny / 2..ny] {
        let col: Vec<f64> = (0..nx)
            .map(|i| half.clone().map(|j| w[i * ny + j].powi(2)).sum())
            .collect();
        let main = col
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |a, (i, c)| if *c > a.1 { (i, *c) } else { a })
            .0;
        let centre = main + nx / 2;
        let width = nx / 4;
        for d in 0..width {
            let i = (centre + nx - width / 2 + d) % nx;
            total += col[i];
        }
    }
    total * g.cell_area()
}

/// Saw-tooth amplitude along row `row`: `max |ρ_i − (ρ_{i−1}+ρ_i+ρ_{i+1})/3|`
/// over the post-shock region, divided by `jump`.
///
/// The shock is the steepest density drop on the row; `margin` cells next
/// to it and next to the inflow boundary are excluded.
pub fn oscillation_metric(state: &CnsState, row: usize, jump: f64, margin: usize) -> f64 {
    let g = state.grid;
    let rho = state.var(0);
    let r = |i: usize| rho[i * g.ny + row];
    let shock = (0..g.nx - 1)
        .max_by(|&a, &b| (r(a) - r(a + 1)).total_cmp(&(r(b) - r(b + 1))))
        .unwrap_or(0);
    let lo = margin.max(1);
    let hi = shock.saturating_sub(margin);
    (lo..hi)
        .map(|i| (r(i) - (r(i - 1) + r(i) + r(i + 1)) / 3.0).abs())
        .fold(0.0, f64::max)
        / jump
}
