use mevisc::coeffs::{self, catalog};
use mevisc::exact::{self, int, rat, Rat};
use mevisc::operators::{FilterPenaltySign, OperatorOptions};
use mevisc::spectral::{self, Symbol};
use mevisc::{SchemeId, TermKind, Variant};
use std::f64::consts::PI;

fn sid(s: &str) -> SchemeId {
    s.parse().unwrap()
}

fn mixed(s: &str) -> SchemeId {
    sid(s).with_term(TermKind::Mixed).unwrap()
}

fn cosine_series(c: &[f64], k: f64) -> f64 {
    c.iter().enumerate().map(|(m, c)| c * (m as f64 * k).cos()).sum()
}

fn assert_matches(s: &Symbol, f: impl Fn(f64) -> f64, tol: f64) {
    for k in spectral::wavenumbers(1024) {
        let (a, b) = (s.eval(k), f(k));
        assert!((a - b).abs() < tol, "{}: k={k} {a} vs {b}", s.scheme);
    }
}

const ME4_BASE_XX: [f64; 4] = [-365.0 / 144.0, 87.0 / 32.0, -3.0 / 16.0, 1.0 / 288.0];
const ME6_BASE_XX: [f64; 6] = [
    -2539103.0 / 921600.0,
    12505.0 / 4096.0,
    -335.0 / 1024.0,
    2245.0 / 73728.0,
    -5.0 / 4096.0,
    9.0 / 204800.0,
];
const ME4_BASE_XY: [f64; 6] = [
    -59.0 / 64.0,
    275.0 / 1152.0,
    65.0 / 72.0,
    -61.0 / 256.0,
    11.0 / 576.0,
    -1.0 / 2304.0,
];
const ME6_BASE_XY: [f64; 9] = [
    -704663.0 / 589824.0,
    31895.0 / 65536.0,
    333251.0 / 307200.0,
    -774123.0 / 1638400.0,
    26711.0 / 245760.0,
    -2779.0 / 196608.0,
    223.0 / 184320.0,
    -281.0 / 4915200.0,
    3.0 / 1638400.0,
];
const ME4_OPTI_XY: [f64; 6] = [
    -438379.0 / 144000.0,
    1009171.0 / 288000.0,
    -487.0 / 900.0,
    10919.0 / 115200.0,
    -2293.0 / 144000.0,
    159.0 / 64000.0,
];
const ME6_OPTI_XY: [f64; 8] = [
    -180127829.0 / 57600000.0,
    28259327.0 / 7680000.0,
    -81089207.0 / 115200000.0,
    7562747.0 / 38400000.0,
    -671839.0 / 11520000.0,
    1784983.0 / 115200000.0,
    -65173.0 / 23040000.0,
    25991.0 / 115200000.0,
];

#[test]
fn base_straight_symbols_match_closed_forms() {
    assert_matches(&Symbol::new(sid("me4-base")).unwrap(), |k| cosine_series(&ME4_BASE_XX, k), 1e-12);
    assert_matches(&Symbol::new(sid("me6-base")).unwrap(), |k| cosine_series(&ME6_BASE_XX, k), 1e-12);
}

/// Parametric 4th-order family: (1/720)[A + B cos k + C cos 2k] sin²(k/2).
fn me4_parametric(psi: [f64; 2], k: f64) -> f64 {
    let (p, q) = (psi[0], psi[1]);
    let a = -3471.0 + 38880.0 * p - 1440.0 * q;
    let b = 628.0 - 51840.0 * p + 1920.0 * q;
    let c = -37.0 + 12960.0 * p - 480.0 * q;
    (a + b * k.cos() + c * (2.0 * k).cos()) * (k / 2.0).sin().powi(2) / 720.0
}

#[test]
fn opti_straight_matches_parametric_form_at_table_psi() {
    let s = Symbol::new(sid("me4-opti")).unwrap();
    assert_matches(&s, |k| me4_parametric([-133.0 / 12500.0, -31.0 / 10000.0], k), 1e-12);
}

#[test]
fn me6_opti_straight_matches_pair_closed_form() {
    let theta = [rat(3, 1250), rat(-1, 1250), rat(3, 625)];
    let w: Vec<f64> = coeffs::me6_family_pair_weights(&theta).iter().map(exact::to_f64).collect();
    let s = Symbol::new(sid("me6-opti")).unwrap();
    assert_matches(
        &s,
        |k| w.iter().enumerate().map(|(m, w)| w * (2.0 * ((m + 1) as f64 * k).cos() - 2.0)).sum(),
        1e-12,
    );
}

#[test]
fn mixed_symbols_match_closed_forms() {
    let cases: [(&str, &[f64]); 4] = [
        ("me4-base", &ME4_BASE_XY),
        ("me6-base", &ME6_BASE_XY),
        ("me4-opti", &ME4_OPTI_XY),
        ("me6-opti", &ME6_OPTI_XY),
    ];
    for (s, c) in cases {
        assert_matches(&Symbol::new(mixed(s)).unwrap(), |k| cosine_series(c, k), 1e-12);
    }
}

#[test]
fn symmetric_penalty_leaves_constant_coefficient_symbol_undamped() {
    // With a same-signed penalty at ±ℓ the filter cancels for constant μ,
    // so the Opti mixed symbol loses its cutoff damping.
    let opts = OperatorOptions {
        penalty: FilterPenaltySign::Symmetric,
        ..Default::default()
    };
    let s = Symbol::with_options(mixed("me4-opti"), opts).unwrap();
    assert!(s.eval(PI).abs() < 1e-12);
    let a = Symbol::new(mixed("me4-opti")).unwrap();
    assert!(a.eval(PI) < -1.0);
}

#[test]
fn cutoff_values() {
    let s = Symbol::new(sid("me4-base")).unwrap();
    let expect = -365.0 / 144.0 - 87.0 / 32.0 - 3.0 / 16.0 - 1.0 / 288.0;
    assert!((s.eval(PI) - expect).abs() < 1e-12);
    let nu = spectral::spectral_viscosity(s.eval(PI), 1.0, PI).unwrap();
    assert!((nu - (-(expect + PI * PI) / (PI * PI))).abs() < 1e-12);
    assert!((nu + 0.4484).abs() < 1e-4);

    let m = Symbol::new(mixed("me4-base")).unwrap();
    let expect = -59.0 / 64.0 - 275.0 / 1152.0 + 65.0 / 72.0 + 61.0 / 256.0 + 11.0 / 576.0
        + 1.0 / 2304.0;
    assert!((m.eval(PI) - expect).abs() < 1e-12);
}

#[test]
fn successive_derivative_reference_is_blind_at_cutoff() {
    for s in ["visbal-e4", "visbal-e6"] {
        let sym = Symbol::new(sid(s)).unwrap();
        assert!(sym.eval(PI).abs() < 1e-12);
        let nu = spectral::spectral_viscosity(sym.eval(PI), 1.0, PI).unwrap();
        assert!((nu + 1.0).abs() < 1e-12);
        assert_eq!(spectral::equivalent_reynolds(sym.eval(PI), 1.0, 1.0, 1.0, PI).unwrap(), None);
    }
}

#[test]
fn midpoint_schemes_damp_less_wrongly_than_reference_at_cutoff() {
    for s in ["me4-base", "me4-opti", "me6-base", "me6-opti"] {
        let sym = Symbol::new(sid(s)).unwrap();
        let nu = spectral::spectral_viscosity(sym.eval(PI), 1.0, PI).unwrap();
        assert!(nu.abs() < 1.0, "{s}: {nu}");
    }
}

#[test]
fn symbols_are_real_and_even() {
    for s in ["me4-base", "me4-opti", "me6-base", "me6-opti", "visbal-e4", "nishikawa"] {
        for id in [Ok(sid(s)), sid(s).with_term(TermKind::Mixed)] {
            let Ok(id) = id else {
                assert_eq!(sid(s).variant(), Variant::NishikawaRef);
                continue;
            };
            let sym = Symbol::new(id).unwrap();
            for k in spectral::wavenumbers(257) {
                let (re, im) = sym.eval_complex(k);
                assert!(im.abs() < 1e-12, "{id}: im {im}");
                assert!((re - sym.eval(-k)).abs() < 1e-13);
            }
            assert!(sym.eval(0.0).abs() < 1e-12);
        }
    }
}

/// Slope of log|k* + k²|/k² against log k over [0.01, 0.1].
fn error_slope(sym: &Symbol) -> f64 {
    let ks = [0.02, 0.04, 0.08];
    let e: Vec<f64> = ks.iter().map(|&k| ((sym.eval(k) + k * k) / (k * k)).abs().ln()).collect();
    (e[2] - e[0]) / (ks[2].ln() - ks[0].ln())
}

#[test]
fn small_k_error_slopes() {
    for (s, order) in [("me4-base", 4.0), ("me4-opti", 4.0), ("me6-base", 6.0), ("me6-opti", 6.0)] {
        let slope = error_slope(&Symbol::new(sid(s)).unwrap());
        assert!((slope - order).abs() < 0.1, "{s}: {slope}");
    }
}

#[test]
fn optimized_4th_order_resolves_more_than_baseline() {
    let b = Symbol::new(sid("me4-base")).unwrap().resolving_efficiency(0.05, 4096).unwrap();
    let o = Symbol::new(sid("me4-opti")).unwrap().resolving_efficiency(0.05, 4096).unwrap();
    assert!(o > b, "{o} vs {b}");
    let o2 = Symbol::new(sid("me4-opti")).unwrap().resolving_efficiency(0.05, 8192).unwrap();
    assert!((o - o2).abs() < 1e-3);
}

#[test]
fn sampled_and_bisected_efficiency_agree() {
    let sym = Symbol::new(sid("me6-base")).unwrap();
    let a = spectral::resolving_efficiency(&sym.curve(4096), 0.05).unwrap();
    let b = sym.resolving_efficiency(0.05, 4096).unwrap();
    assert!((a - b).abs() < 1e-5, "{a} {b}");
}

/// k⁶ coefficient `c` of k* = −k²(1 + c k⁴ + …) from exact pair weights.
fn k6_coefficient(w: &[Rat]) -> Rat {
    w.iter()
        .enumerate()
        .fold(Rat::from_integer(0.into()), |a, (m, w)| {
            a + int(2) * w * int(((m + 1) as i64).pow(6)) / int(720)
        })
}

#[test]
fn series_coefficients_from_exact_weights() {
    let base = coeffs::symmetric_pair_weights(&coeffs::assembled_straight_weights(
        &catalog(sid("me4-base")).unwrap(),
    ));
    assert_eq!(k6_coefficient(&base), rat(-3, 320));
    let opti = coeffs::symmetric_pair_weights(&coeffs::assembled_straight_weights(
        &catalog(sid("me4-opti")).unwrap(),
    ));
    // The published series coefficient −2437/240000 corresponds to neither the
    // published rows nor the stated optimum.
    assert_ne!(k6_coefficient(&opti), rat(-2437, 240000));
    let stated = coeffs::me4_family_pair_weights(&[rat(-1, 100), rat(0, 1)]);
    assert_ne!(k6_coefficient(&stated), rat(-2437, 240000));
}
