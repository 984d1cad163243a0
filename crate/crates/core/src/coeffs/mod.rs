//! Scheme identities and exact coefficient sets.
//!
//! Every weight is an exact rational. Midpoint derivative stencils and
//! interpolation rules are stored for the positive half-node locations
//! `+1/2, +3/2, +5/2` as weights over node offsets relative to node `j`; the
//! negative locations are obtained by mirroring.
//!
//! Leading-error convention: for a midpoint derivative stencil `w_p` at
//! location `ℓ`, define the Taylor moments about the midpoint
//! `M_m = Σ_p w_p (p − ℓ)^m / m!`. A stencil of formal order `q` has
//! `M_1 = 1` and `M_m = 0` for the other `m ≤ q`; its leading-error
//! coefficient is `ψ = −M_{q+1}`, so that the stencil applied to `φ` returns
//! `φ'(ℓ) − ψ φ^{(q+1)}(ℓ) Δx^q + …`. With this convention the outermost
//! weight of the optimized family equals `−ψ`.

pub mod tables;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{self, int, rat, Rat};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Base,
    Opti,
    VisbalRef,
    NishikawaRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermKind {
    Straight,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeId {
    order: u32,
    variant: Variant,
    term: TermKind,
}

impl SchemeId {
    pub fn new(order: u32, variant: Variant, term: TermKind) -> Result<Self> {
        if order != 4 && order != 6 {
            return Err(Error::UnsupportedOrder(order));
        }
        if variant == Variant::NishikawaRef && (order != 4 || term != TermKind::Straight) {
            return Err(Error::InvalidScheme(
                "the alpha-damping reference exists only as a 4th-order straight scheme".into(),
            ));
        }
        Ok(Self { order, variant, term })
    }

    pub fn straight(order: u32, variant: Variant) -> Result<Self> {
        Self::new(order, variant, TermKind::Straight)
    }

    pub fn mixed(order: u32, variant: Variant) -> Result<Self> {
        Self::new(order, variant, TermKind::Mixed)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn term(&self) -> TermKind {
        self.term
    }

    pub fn with_term(self, term: TermKind) -> Result<Self> {
        Self::new(self.order, self.variant, term)
    }

    /// Half-width (in nodes) of the stencil of the assembled operator.
    pub fn half_width(&self) -> usize {
        match (self.variant, self.order, self.term) {
            (Variant::Base, 4, _) => 3,
            (Variant::Base, _, _) => 5,
            (Variant::Opti, 4, TermKind::Straight) => 4,
            (Variant::Opti, _, TermKind::Straight) => 6,
            (Variant::Opti, 4, TermKind::Mixed) => 5,
            (Variant::Opti, _, TermKind::Mixed) => 7,
            (Variant::VisbalRef, 4, _) => 4,
            (Variant::VisbalRef, _, _) => 6,
            (Variant::NishikawaRef, _, _) => 2,
        }
    }

    /// Stable lowercase name as used on the command line, e.g. `me4-opti`.
    pub fn slug(&self) -> String {
        match self.variant {
            Variant::Base => format!("me{}-base", self.order),
            Variant::Opti => format!("me{}-opti", self.order),
            Variant::VisbalRef => format!("visbal-e{}", self.order),
            Variant::NishikawaRef => "nishikawa".to_string(),
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.variant {
            Variant::Base => format!("ME{}-Base", self.order),
            Variant::Opti => format!("ME{}-Opti", self.order),
            Variant::VisbalRef => format!("Visbal-E{}", self.order),
            Variant::NishikawaRef => "Nishikawa-alpha".to_string(),
        };
        let term = match self.term {
            TermKind::Straight => "straight",
            TermKind::Mixed => "mixed",
        };
        write!(f, "{name} ({term})")
    }
}

/// Parses `me4-base`, `me6-opti`, `visbal-e4`, `visbal-e6`, `nishikawa`;
/// the term kind defaults to straight.
impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (variant, order) = match s.as_str() {
            "me4-base" => (Variant::Base, 4),
            "me6-base" => (Variant::Base, 6),
            "me4-opti" => (Variant::Opti, 4),
            "me6-opti" => (Variant::Opti, 6),
            "visbal-e4" => (Variant::VisbalRef, 4),
            "visbal-e6" => (Variant::VisbalRef, 6),
            "nishikawa" | "nishikawa-alpha" => (Variant::NishikawaRef, 4),
            other => return Err(Error::InvalidScheme(other.to_string())),
        };
        Self::new(order, variant, TermKind::Straight)
    }
}

impl FromStr for TermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "straight" => Ok(TermKind::Straight),
            "mixed" => Ok(TermKind::Mixed),
            other => Err(Error::InvalidScheme(format!("unknown term kind {other}"))),
        }
    }
}

/// A half-integer offset `twice / 2` (`twice` odd), e.g. `+3/2` is `HalfOffset(3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfOffset(i32);

impl HalfOffset {
    pub fn new(twice: i32) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(Error::InvalidInput(format!("{twice}/2 is not a half-integer")));
        }
        Ok(Self(twice))
    }

    /// `+1/2`, `+3/2`, `+5/2` for level 0, 1, 2.
    pub fn level(level: usize) -> Self {
        Self(2 * level as i32 + 1)
    }

    pub fn twice(&self) -> i32 {
        self.0
    }

    pub fn as_rat(&self) -> Rat {
        rat(self.0 as i64, 2)
    }

    pub fn as_f64(&self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_positive(&self) -> bool {
        self.0 > 0
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }
}

impl std::ops::Neg for HalfOffset {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl fmt::Display for HalfOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}/2", self.0)
    }
}

impl FromStr for HalfOffset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = exact::parse(s).ok_or_else(|| Error::InvalidInput(format!("bad location {s}")))?;
        let twice = r * int(2);
        if !twice.is_integer() {
            return Err(Error::InvalidInput(format!("bad location {s}")));
        }
        Self::new(twice.to_integer().to_i32().unwrap_or(0))
    }
}

/// Flux-difference weights `(a*, b*, c*)`: the operator is
/// `a*/Δx (F_{+1/2} − F_{−1/2}) + b*/(3Δx) (F_{+3/2} − F_{−3/2}) + c*/(5Δx) (F_{+5/2} − F_{−5/2})`.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterWeights {
    pub a_star: Rat,
    pub b_star: Rat,
    pub c_star: Rat,
}

impl OuterWeights {
    /// The multiplier of `F_{+ℓ} − F_{−ℓ}` for level 0, 1, 2 (i.e. `a*`, `b*/3`, `c*/5`).
    pub fn level_weights(&self) -> [Rat; 3] {
        [
            self.a_star.clone(),
            &self.b_star / int(3),
            &self.c_star / int(5),
        ]
    }

    pub fn level_weights_f64(&self) -> [f64; 3] {
        self.level_weights().map(|r| exact::to_f64(&r))
    }
}

pub fn outer_weights(order: u32) -> Result<OuterWeights> {
    match order {
        4 => Ok(OuterWeights {
            a_star: rat(9, 8),
            b_star: rat(-1, 8),
            c_star: Rat::zero(),
        }),
        6 => Ok(OuterWeights {
            a_star: rat(75, 64),
            b_star: rat(-25, 128),
            c_star: rat(3, 128),
        }),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

/// Number of half-node levels used by the outer difference.
pub fn levels(order: u32) -> usize {
    if order == 4 {
        2
    } else {
        3
    }
}

/// Taylor moment `Σ_p w_p (p − ℓ)^m / m!` of a stencil about `ℓ`.
pub fn moment(offsets: &[i32], weights: &[Rat], loc: &Rat, m: u32) -> Rat {
    let f = Rat::from_integer(exact::factorial(m));
    offsets
        .iter()
        .zip(weights)
        .map(|(&p, w)| w * exact::pow(&(int(p as i64) - loc), m))
        .fold(Rat::zero(), |a, b| a + b)
        / f
}

#[derive(Debug, Clone, PartialEq)]
pub struct MidpointStencil {
    pub location: HalfOffset,
    pub offsets: Vec<i32>,
    pub weights: Vec<Rat>,
    pub leading_error: Rat,
    pub formal_order: u32,
}

impl MidpointStencil {
    pub fn moment(&self, m: u32) -> Rat {
        moment(&self.offsets, &self.weights, &self.location.as_rat(), m)
    }

    /// The stencil at `−ℓ`: `w(−ℓ, −p) = −w(ℓ, p)`. Moments transform as
    /// `M_m → (−1)^{m+1} M_m`, so the leading-error coefficient changes sign
    /// when the formal order is odd.
    pub fn mirrored(&self) -> Self {
        let mut pairs: Vec<(i32, Rat)> = self
            .offsets
            .iter()
            .zip(&self.weights)
            .map(|(&p, w)| (-p, -w.clone()))
            .collect();
        pairs.sort_by_key(|(p, _)| *p);
        let (offsets, weights) = pairs.into_iter().unzip();
        Self {
            location: -self.location,
            offsets,
            weights,
            leading_error: if self.formal_order % 2 == 1 {
                -self.leading_error.clone()
            } else {
                self.leading_error.clone()
            },
            formal_order: self.formal_order,
        }
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(exact::to_f64).collect()
    }

    /// Weight at node offset `p` (zero when `p` is outside the stencil).
    pub fn weight(&self, p: i32) -> Rat {
        self.offsets
            .iter()
            .position(|&q| q == p)
            .map(|i| self.weights[i].clone())
            .unwrap_or_else(Rat::zero)
    }
}

fn family_shape(order: u32) -> Result<(i32, u32)> {
    match order {
        4 => Ok((3, 5)),
        6 => Ok((4, 7)),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

fn check_location(order: u32, loc: HalfOffset) -> Result<()> {
    let max = if order == 4 { 3 } else { 5 };
    if loc.twice().abs() > max {
        return Err(Error::InvalidLocation {
            order,
            loc: loc.to_string(),
        });
    }
    Ok(())
}

/// Solves the moment system on offsets `-n..=n` about `loc`, with
/// `targets[m]` the required value of moment `m`.
fn solve_moments(n: i32, loc: &Rat, targets: &[Rat]) -> Result<Vec<Rat>> {
    let offsets: Vec<i32> = (-n..=n).collect();
    debug_assert_eq!(targets.len(), offsets.len());
    let rows = targets
        .iter()
        .enumerate()
        .map(|(m, _)| {
            let f = Rat::from_integer(exact::factorial(m as u32));
            offsets
                .iter()
                .map(|&p| exact::pow(&(int(p as i64) - loc), m as u32) / &f)
                .collect()
        })
        .collect();
    exact::solve(rows, targets.to_vec()).ok_or(Error::Singular)
}

/// The optimized midpoint derivative family: full stencil `-n..=n`
/// (`n = 3` for order 4, `n = 4` for order 6), accuracy one order above the
/// scheme order, with the leading error moment pinned to `−leading_error`.
///
/// Negative locations return the mirror image of the positive-location
/// stencil derived with the same parameter.
pub fn derive_midpoint_family(
    order: u32,
    location: HalfOffset,
    leading_error: &Rat,
) -> Result<MidpointStencil> {
    let (n, formal) = family_shape(order)?;
    check_location(order, location)?;
    if !location.is_positive() {
        return Ok(derive_midpoint_family(order, location.abs(), leading_error)?.mirrored());
    }
    let mut targets = vec![Rat::zero(); formal as usize + 2];
    targets[1] = Rat::one();
    targets[formal as usize + 1] = -leading_error.clone();
    let weights = solve_moments(n, &location.as_rat(), &targets)?;
    Ok(MidpointStencil {
        location,
        offsets: (-n..=n).collect(),
        weights,
        leading_error: leading_error.clone(),
        formal_order: formal,
    })
}

/// Sliding central midpoint derivative built from the outer weights:
/// `a*(φ_{r+1} − φ_r) + b*/3 (φ_{r+2} − φ_{r−1}) + c*/5 (φ_{r+3} − φ_{r−2})`
/// for the midpoint `r + 1/2`.
pub fn baseline_midpoint(order: u32, location: HalfOffset) -> Result<MidpointStencil> {
    let ow = outer_weights(order)?;
    check_location(order, location)?;
    if !location.is_positive() {
        return Ok(baseline_midpoint(order, location.abs())?.mirrored());
    }
    let r = (location.twice() - 1).div_euclid(2);
    let lw = ow.level_weights();
    let mut pairs: Vec<(i32, Rat)> = Vec::new();
    for (lev, w) in lw.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let l = lev as i32;
        pairs.push((r + 1 + l, w.clone()));
        pairs.push((r - l, -w.clone()));
    }
    pairs.sort_by_key(|(p, _)| *p);
    let (offsets, weights): (Vec<i32>, Vec<Rat>) = pairs.into_iter().unzip();
    let loc = location.as_rat();
    let lead = -moment(&offsets, &weights, &loc, order + 1);
    Ok(MidpointStencil {
        location,
        offsets,
        weights,
        leading_error: lead,
        formal_order: order,
    })
}

/// Midpoint interpolation weights plus the (zero-sum, symmetric) filter
/// penalty weights over the same node offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationRule {
    pub location: HalfOffset,
    pub offsets: Vec<i32>,
    pub interp: Vec<Rat>,
    pub filter: Vec<Rat>,
}

impl InterpolationRule {
    pub fn interp_moment(&self, m: u32) -> Rat {
        moment(&self.offsets, &self.interp, &self.location.as_rat(), m)
    }

    pub fn interp_f64(&self) -> Vec<f64> {
        self.interp.iter().map(exact::to_f64).collect()
    }

    pub fn filter_f64(&self) -> Vec<f64> {
        self.filter.iter().map(exact::to_f64).collect()
    }

    pub fn has_filter(&self) -> bool {
        self.filter.iter().any(|f| !f.is_zero())
    }
}

/// Standard central midpoint interpolation (`9/16, −1/16` or
/// `75/128, −25/256, 3/256`), slid to `location`; no filter term.
pub fn baseline_interpolation(order: u32, location: HalfOffset) -> Result<InterpolationRule> {
    check_location(order, location)?;
    let c: Vec<Rat> = match order {
        4 => vec![rat(9, 16), rat(-1, 16)],
        6 => vec![rat(75, 128), rat(-25, 256), rat(3, 256)],
        o => return Err(Error::UnsupportedOrder(o)),
    };
    // midpoint between nodes r and r+1
    let r = (location.twice() - 1).div_euclid(2);
    let mut pairs: Vec<(i32, Rat)> = Vec::new();
    for (l, w) in c.iter().enumerate() {
        let l = l as i32;
        pairs.push((r + 1 + l, w.clone()));
        pairs.push((r - l, w.clone()));
    }
    pairs.sort_by_key(|(p, _)| *p);
    let (offsets, interp): (Vec<i32>, Vec<Rat>) = pairs.into_iter().unzip();
    let filter = vec![Rat::zero(); offsets.len()];
    Ok(InterpolationRule {
        location,
        offsets,
        interp,
        filter,
    })
}

/// Interpolation to `location` on the full stencil `-n..=n`, reproducing
/// constants, annihilating moments `1..2n−3`, and with moments
/// `2n−2, 2n−1, 2n` set to `pinned`.
pub fn derive_interpolation(
    order: u32,
    location: HalfOffset,
    pinned: &[Rat; 3],
) -> Result<Vec<Rat>> {
    let (n, _) = family_shape(order)?;
    check_location(order, location)?;
    let mut targets = vec![Rat::zero(); 2 * n as usize + 1];
    targets[0] = Rat::one();
    let k = targets.len();
    targets[k - 3..].clone_from_slice(pinned);
    solve_moments(n, &location.as_rat(), &targets)
}

/// Filter penalty weights `σ·δ^{2n}` on offsets `-n..=n`:
/// `σ (−1)^{p+n} C(2n, n+p)`.
pub fn derive_filter(order: u32, sigma: &Rat) -> Result<Vec<Rat>> {
    let (n, _) = family_shape(order)?;
    Ok((-n..=n)
        .map(|p| {
            let c = Rat::from_integer(exact::binomial(2 * n as u32, (n + p) as u32));
            let s = if (p + n) % 2 == 0 { int(1) } else { int(-1) };
            sigma * s * c
        })
        .collect())
}

/// Leading-error parameters stated in the published text (`ψ_{1/2}, ψ_{3/2}`
/// for order 4, `ϑ_{1/2}, ϑ_{3/2}, ϑ_{5/2}` for order 6).
pub fn stated_leading_errors(order: u32) -> Result<Vec<Rat>> {
    match order {
        4 => Ok(vec![rat(-1, 100), Rat::zero()]),
        6 => Ok(vec![rat(3, 1250), rat(-1, 1250), rat(3, 625)]),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

/// Leading-error parameters that regenerate the published coefficient rows.
///
/// For order 6 these coincide with the stated values. For order 4 the
/// published rows correspond to `(−133/12500, −31/10000)` rather than the
/// stated `(−1/100, 0)`; see the README for the discussion.
pub fn table_leading_errors(order: u32) -> Result<Vec<Rat>> {
    match order {
        4 => Ok(vec![rat(-133, 12500), rat(-31, 10000)]),
        6 => stated_leading_errors(6),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

/// Pinned high moments `(M_{2n−2}, M_{2n−1}, M_{2n})` of the published
/// optimized interpolation rows, per level.
pub fn interpolation_moments(order: u32) -> Result<Vec<[Rat; 3]>> {
    match order {
        4 => Ok(vec![
            [rat(-2, 125), rat(-9, 500), Rat::zero()],
            [Rat::zero(), rat(-1, 2000), Rat::zero()],
        ]),
        6 => Ok(vec![
            [rat(1, 200), rat(3, 500), Rat::zero()],
            [Rat::zero(), rat(-1, 2000), Rat::zero()],
            [Rat::zero(), rat(-1, 2000), Rat::zero()],
        ]),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

/// Filter strengths `σ` of the published optimized filter rows, per level.
pub fn filter_strengths(order: u32) -> Result<Vec<Rat>> {
    match order {
        4 => Ok(vec![rat(1, 20), rat(-1, 2000)]),
        6 => Ok(vec![rat(-13, 1000), rat(-1, 2000), rat(-1, 2000)]),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

/// Standard central first-derivative weights `d_1..d_n` (antisymmetric:
/// `φ' ≈ Σ d_p (φ_{j+p} − φ_{j−p}) / Δx`).
pub fn central_first(order: u32) -> Result<Vec<Rat>> {
    match order {
        2 => Ok(vec![rat(1, 2)]),
        4 => Ok(vec![rat(2, 3), rat(-1, 12)]),
        6 => Ok(vec![rat(3, 4), rat(-3, 20), rat(1, 60)]),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

fn table_row(row: &[&str]) -> Vec<Rat> {
    row.iter()
        .map(|s| exact::parse(s).expect("malformed coefficient table entry"))
        .collect()
}

/// Published optimized midpoint derivative rows (positive locations).
pub fn table_midpoint_rows(order: u32) -> Result<Vec<Vec<Rat>>> {
    use tables::*;
    match order {
        4 => Ok(vec![table_row(&ME4_OPTI_A), table_row(&ME4_OPTI_B)]),
        6 => Ok(vec![
            table_row(&ME6_OPTI_A),
            table_row(&ME6_OPTI_B),
            table_row(&ME6_OPTI_C),
        ]),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

/// Published optimized interpolation and filter rows (positive locations).
pub fn table_interpolation_rows(order: u32) -> Result<Vec<(Vec<Rat>, Vec<Rat>)>> {
    use tables::*;
    match order {
        4 => Ok(vec![
            (table_row(&ME4_INTERP_A), table_row(&ME4_FILTER_A)),
            (table_row(&ME4_INTERP_B), table_row(&ME4_FILTER_B)),
        ]),
        6 => Ok(vec![
            (table_row(&ME6_INTERP_A), table_row(&ME6_FILTER_A)),
            (table_row(&ME6_INTERP_B), table_row(&ME6_FILTER_B)),
            (table_row(&ME6_INTERP_C), table_row(&ME6_FILTER_C)),
        ]),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

/// Everything needed to assemble one scheme.
#[derive(Debug, Clone)]
pub struct SchemeCoefficients {
    pub scheme: SchemeId,
    pub outer: OuterWeights,
    /// Midpoint derivatives at `+1/2, +3/2[, +5/2]` (empty for the references).
    pub derivatives: Vec<MidpointStencil>,
    /// Midpoint interpolation (+ filter) rules at the same locations.
    pub interpolations: Vec<InterpolationRule>,
    /// Central nodal first-derivative weights `d_1..d_n` of the scheme order.
    pub nodal_first: Vec<Rat>,
}

pub fn catalog(scheme: SchemeId) -> Result<SchemeCoefficients> {
    let order = scheme.order();
    let outer = outer_weights(order)?;
    let nodal_first = central_first(order)?;
    let nlev = levels(order);
    let (n, formal) = family_shape(order)?;
    let (derivatives, interpolations) = match scheme.variant() {
        Variant::Base => {
            let mut d = Vec::new();
            let mut i = Vec::new();
            for lev in 0..nlev {
                d.push(baseline_midpoint(order, HalfOffset::level(lev))?);
                i.push(baseline_interpolation(order, HalfOffset::level(lev))?);
            }
            (d, i)
        }
        Variant::Opti => {
            let psi = table_leading_errors(order)?;
            let d = table_midpoint_rows(order)?
                .into_iter()
                .enumerate()
                .map(|(lev, w)| MidpointStencil {
                    location: HalfOffset::level(lev),
                    offsets: (-n..=n).collect(),
                    weights: w,
                    leading_error: psi[lev].clone(),
                    formal_order: formal,
                })
                .collect();
            let i = table_interpolation_rows(order)?
                .into_iter()
                .enumerate()
                .map(|(lev, (interp, filter))| InterpolationRule {
                    location: HalfOffset::level(lev),
                    offsets: (-n..=n).collect(),
                    interp,
                    filter,
                })
                .collect();
            (d, i)
        }
        Variant::VisbalRef => (Vec::new(), Vec::new()),
        Variant::NishikawaRef => {
            return Err(Error::InvalidScheme(
                "the alpha-damping reference is parametric; use operators::nishikawa_alpha_d2"
                    .into(),
            ))
        }
    };
    Ok(SchemeCoefficients {
        scheme,
        outer,
        derivatives,
        interpolations,
        nodal_first,
    })
}

/// One row of the JSON coefficient dump.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CoeffDump {
    pub scheme: String,
    pub kind: String,
    pub location: String,
    pub offsets: Vec<i32>,
    pub numerators: Vec<i64>,
    pub denominators: Vec<i64>,
}

fn dump_row(scheme: &SchemeId, kind: &str, loc: HalfOffset, offsets: &[i32], w: &[Rat]) -> CoeffDump {
    let num = |r: &Rat| r.numer().to_i64().expect("numerator fits in i64");
    let den = |r: &Rat| r.denom().to_i64().expect("denominator fits in i64");
    CoeffDump {
        scheme: scheme.slug(),
        kind: kind.to_string(),
        location: loc.to_string(),
        offsets: offsets.to_vec(),
        numerators: w.iter().map(num).collect(),
        denominators: w.iter().map(den).collect(),
    }
}

/// Flattens a coefficient set into dump rows: outer weights, then the
/// derivative, interpolation and filter rows per location.
pub fn dump(c: &SchemeCoefficients) -> Vec<CoeffDump> {
    let s = &c.scheme;
    let mut out = vec![dump_row(
        s,
        "outer",
        HalfOffset::level(0),
        &[1, 3, 5],
        &[c.outer.a_star.clone(), c.outer.b_star.clone(), c.outer.c_star.clone()],
    )];
    for d in &c.derivatives {
        out.push(dump_row(s, "derivative", d.location, &d.offsets, &d.weights));
    }
    for i in &c.interpolations {
        out.push(dump_row(s, "interpolation", i.location, &i.offsets, &i.interp));
        if i.has_filter() {
            out.push(dump_row(s, "filter", i.location, &i.offsets, &i.filter));
        }
    }
    let n = c.nodal_first.len() as i32;
    out.push(dump_row(
        s,
        "nodal-first",
        HalfOffset::level(0),
        &(1..=n).collect::<Vec<_>>(),
        &c.nodal_first,
    ));
    out
}

/// Weights `w_m` of `(φ_{j+m} − 2φ_j + φ_{j−m})`, `m = 1..`, of an assembled
/// symmetric straight operator with unit diffusivity, given its node weights
/// over `-h..=h`.
pub fn symmetric_pair_weights(node_weights: &[(i32, Rat)]) -> Vec<Rat> {
    let h = node_weights.iter().map(|(p, _)| p.abs()).max().unwrap_or(0);
    (1..=h)
        .map(|m| {
            node_weights
                .iter()
                .find(|(p, _)| *p == m)
                .map(|(_, w)| w.clone())
                .unwrap_or_else(Rat::zero)
        })
        .collect()
}

/// Exact node weights of the straight operator with `μ ≡ 1` and unit
/// spacing: `Σ_ℓ o_ℓ (D_{+ℓ} − D_{−ℓ})`.
pub fn assembled_straight_weights(c: &SchemeCoefficients) -> Vec<(i32, Rat)> {
    let lw = c.outer.level_weights();
    let mut acc: std::collections::BTreeMap<i32, Rat> = Default::default();
    for (lev, d) in c.derivatives.iter().enumerate() {
        let m = d.mirrored();
        for (p, w) in d.offsets.iter().zip(&d.weights) {
            *acc.entry(*p).or_insert_with(Rat::zero) += &lw[lev] * w;
        }
        for (p, w) in m.offsets.iter().zip(&m.weights) {
            *acc.entry(*p).or_insert_with(Rat::zero) -= &lw[lev] * w;
        }
    }
    acc.into_iter().filter(|(_, w)| !w.is_zero()).collect()
}

/// Closed-form pair weights of the parametric 4th-order optimized family,
/// which depend on `ψ` only through `X = 27ψ_{1/2} − ψ_{3/2}`.
pub fn me4_family_pair_weights(psi: &[Rat]) -> Vec<Rat> {
    let x = int(27) * &psi[0] - &psi[1];
    let c160 = int(160);
    vec![
        (int(183) - &c160 * &x) / int(128),
        (int(-39) + &c160 * &x) / int(320),
        (int(37) - int(480) * &x) / int(5760),
    ]
}

/// Closed-form pair weights of the parametric 6th-order optimized family in
/// terms of `Y = 2250ϑ_{1/2} − 125ϑ_{3/2} + 9ϑ_{5/2}`.
pub fn me6_family_pair_weights(theta: &[Rat]) -> Vec<Rat> {
    let y = int(2250) * &theta[0] - int(125) * &theta[1] + int(9) * &theta[2];
    vec![
        (int(2997) + int(112) * &y) / int(1920),
        (int(-693) - int(112) * &y) / int(3840),
        (int(799) + int(336) * &y) / int(40320),
        (int(-117) - int(112) * &y) / int(13440 * 8),
    ]
}

/// Whether every weight is "small" enough to print as an `i64` fraction.
pub fn fits_i64(r: &Rat) -> bool {
    r.numer().abs().to_i64().is_some() && r.denom().to_i64().is_some()
}
