use mevisc::coeffs::{
    self, baseline_midpoint, catalog, derive_filter, derive_interpolation,
    derive_midpoint_family, HalfOffset, MidpointStencil,
};
use mevisc::exact::{int, parse, rat, Rat};
use mevisc::{SchemeId, Variant};
use num_traits::{One, Zero};

fn r(s: &str) -> Rat {
    parse(s).unwrap()
}

fn rows(v: &[&str]) -> Vec<Rat> {
    v.iter().map(|s| r(s)).collect()
}

fn sum(w: &[Rat]) -> Rat {
    w.iter().fold(Rat::zero(), |a, b| a + b)
}

const ME4_OPTI_A: [&str; 7] = [
    "133/12500", "-27411/400000", "53929/240000", "-55387/40000", "53259/40000",
    "-154733/1200000", "6131/400000",
];
const ME4_OPTI_B: [&str; 7] = [
    "623/80000", "-4113/80000", "561/4000", "-3863/24000", "-15381/16000", "84387/80000",
    "-3503/120000",
];
const ME6_OPTI_A: [&str; 9] = [
    "-3/1250", "89141/4480000", "-49133/640000", "411173/1920000", "-174629/128000",
    "851641/640000", "-282149/1920000", "18413/640000", "-13877/4480000",
];
const ME6_OPTI_B: [&str; 9] = [
    "459/4480000", "-547/4480000", "-1289/640000", "2703/640000", "18379/384000",
    "-738047/640000", "742461/640000", "-820391/13440000", "9167/2240000",
];
// last entry printed as -4000637/13440000; see `me6_opti_typo_in_last_c_entry`
const ME6_OPTI_C: [&str; 9] = [
    "-3377/2240000", "36157/4480000", "-6141/640000", "-20593/640000", "16367/128000",
    "-296029/1920000", "-618391/640000", "4737907/4480000", "-400637/13440000",
];

#[test]
fn me4_opti_rows_regenerated_by_the_derived_family() {
    let a = derive_midpoint_family(4, HalfOffset::level(0), &rat(-133, 12500)).unwrap();
    let b = derive_midpoint_family(4, HalfOffset::level(1), &rat(-31, 10000)).unwrap();
    assert_eq!(a.weights, rows(&ME4_OPTI_A));
    assert_eq!(b.weights, rows(&ME4_OPTI_B));
}

#[test]
fn stated_fourth_order_psi_does_not_give_published_rows() {
    // at +1/2 the outermost weight of the family equals -ψ, so ψ_{1/2} = -1/100
    // necessarily yields a_{-3} = 1/100, not the tabulated 133/12500
    let a = derive_midpoint_family(4, HalfOffset::level(0), &rat(-1, 100)).unwrap();
    assert_eq!(a.weight(-3), rat(1, 100));
    assert_ne!(a.weights, rows(&ME4_OPTI_A));
    let b = derive_midpoint_family(4, HalfOffset::level(1), &Rat::zero()).unwrap();
    assert_ne!(b.weights, rows(&ME4_OPTI_B));
}

#[test]
fn me6_opti_rows_regenerated_at_stated_theta() {
    let th = [rat(3, 1250), rat(-1, 1250), rat(3, 625)];
    let expect = [rows(&ME6_OPTI_A), rows(&ME6_OPTI_B), rows(&ME6_OPTI_C)];
    for lev in 0..3 {
        let s = derive_midpoint_family(6, HalfOffset::level(lev), &th[lev]).unwrap();
        assert_eq!(s.weights, expect[lev], "level {lev}");
    }
}

#[test]
fn me6_opti_typo_in_last_c_entry() {
    let mut printed = rows(&ME6_OPTI_C);
    printed[8] = r("-4000637/13440000");
    assert_ne!(sum(&printed), Rat::zero());
    assert_eq!(sum(&rows(&ME6_OPTI_C)), Rat::zero());
}

#[test]
fn leading_error_convention_on_x6() {
    // independent oracle: apply the 7-point stencil to x^6 at unit spacing
    // (nodes at p, midpoint at l) and compare with d/dx x^6 = 6 l^5; the
    // Taylor remainder is M_6 * 720 = -720 ψ
    for (lev, psi) in [(0usize, rat(-1, 100)), (1, rat(3, 17)), (0, rat(5, 3))] {
        let s = derive_midpoint_family(4, HalfOffset::level(lev), &psi).unwrap();
        let l = HalfOffset::level(lev).as_rat();
        let applied = s
            .offsets
            .iter()
            .zip(&s.weights)
            .fold(Rat::zero(), |acc, (&p, w)| acc + w * int((p as i64).pow(6)));
        let exact = int(6) * &l * &l * &l * &l * &l;
        assert_eq!(applied - exact, int(-720) * psi);
        // x^5 is reproduced exactly by a fifth-order stencil
        let applied5 = s
            .offsets
            .iter()
            .zip(&s.weights)
            .fold(Rat::zero(), |acc, (&p, w)| acc + w * int((p as i64).pow(5)));
        assert_eq!(applied5, int(5) * &l * &l * &l * &l);
    }
}

fn check_derivative_invariants(s: &MidpointStencil) {
    assert_eq!(s.moment(0), Rat::zero());
    assert_eq!(s.moment(1), Rat::one());
    // slope 1 on φ = x sampled at the offsets
    let slope = s
        .offsets
        .iter()
        .zip(&s.weights)
        .fold(Rat::zero(), |a, (&p, w)| a + w * int(p as i64));
    assert_eq!(slope, Rat::one());
    for m in 2..=s.formal_order {
        assert_eq!(s.moment(m), Rat::zero(), "moment {m} at {}", s.location);
    }
    assert_eq!(s.moment(s.formal_order + 1), -s.leading_error.clone());
}

#[test]
fn catalog_invariants_all_schemes() {
    for order in [4, 6] {
        for variant in [Variant::Base, Variant::Opti] {
            for scheme in [
                SchemeId::straight(order, variant).unwrap(),
                SchemeId::mixed(order, variant).unwrap(),
            ] {
                let c = catalog(scheme).unwrap();
                assert_eq!(c.derivatives.len(), coeffs::levels(order));
                for d in &c.derivatives {
                    check_derivative_invariants(d);
                    check_derivative_invariants(&d.mirrored());
                }
                for i in &c.interpolations {
                    assert_eq!(sum(&i.interp), Rat::one());
                    assert_eq!(sum(&i.filter), Rat::zero());
                    let n = i.filter.len();
                    for k in 0..n {
                        assert_eq!(i.filter[k], i.filter[n - 1 - k]);
                    }
                }
            }
        }
    }
}

#[test]
fn catalog_rows_match_published_values() {
    let c = catalog(SchemeId::straight(6, Variant::Opti).unwrap()).unwrap();
    assert_eq!(c.derivatives[2].weight(-4), rat(-3377, 2240000));
    let c = catalog(SchemeId::mixed(4, Variant::Opti).unwrap()).unwrap();
    assert_eq!(c.interpolations[0].interp[3], rat(72409, 96000));
    assert_eq!(c.interpolations[0].filter[3], int(-1));
    let c = catalog(SchemeId::mixed(6, Variant::Opti).unwrap()).unwrap();
    assert_eq!(c.interpolations[1].filter, c.interpolations[2].filter);
    assert!(catalog(SchemeId::straight(4, Variant::NishikawaRef).unwrap()).is_err());
}

#[test]
fn catalog_opti_equals_derived_family() {
    for order in [4, 6] {
        let psi = coeffs::table_leading_errors(order).unwrap();
        let c = catalog(SchemeId::straight(order, Variant::Opti).unwrap()).unwrap();
        for (lev, d) in c.derivatives.iter().enumerate() {
            let g = derive_midpoint_family(order, HalfOffset::level(lev), &psi[lev]).unwrap();
            assert_eq!(d.weights, g.weights);
        }
    }
}

#[test]
fn interpolation_and_filter_rows_regenerated() {
    for order in [4, 6] {
        let pins = coeffs::interpolation_moments(order).unwrap();
        let sig = coeffs::filter_strengths(order).unwrap();
        let table = coeffs::table_interpolation_rows(order).unwrap();
        for (lev, (interp, filter)) in table.iter().enumerate() {
            let i = derive_interpolation(order, HalfOffset::level(lev), &pins[lev]).unwrap();
            assert_eq!(&i, interp, "order {order} level {lev}");
            assert_eq!(&derive_filter(order, &sig[lev]).unwrap(), filter);
        }
    }
}

#[test]
fn me4_filter_rows_literal() {
    let f = derive_filter(4, &rat(1, 20)).unwrap();
    assert_eq!(f, rows(&["1/20", "-3/10", "3/4", "-1", "3/4", "-3/10", "1/20"]));
    let f = derive_filter(6, &rat(-13, 1000)).unwrap();
    assert_eq!(f[4], rat(-91, 100));
    assert_eq!(f[1], rat(13, 125));
}

// published parametric closed form transcribed directly: pair weights of
// (φ_{j+m} - 2φ_j + φ_{j-m}) in terms of X = 27ψ_{1/2} - ψ_{3/2}
fn me4_closed_form(x: &Rat) -> Vec<Rat> {
    vec![
        (int(183) - int(160) * x) / int(64) / int(2),
        (int(-39) + int(160) * x) / int(80) / int(4),
        (int(37) - int(480) * x) / int(960) / int(6),
    ]
}

fn pair_weights(scheme: SchemeId) -> Vec<Rat> {
    let c = catalog(scheme).unwrap();
    coeffs::symmetric_pair_weights(&coeffs::assembled_straight_weights(&c))
}

#[test]
fn assembled_me4_opti_matches_closed_form_at_table_psi() {
    let x = int(27) * rat(-133, 12500) - rat(-31, 10000);
    assert_eq!(x, rat(-14209, 50000));
    assert_eq!(pair_weights(SchemeId::straight(4, Variant::Opti).unwrap()), me4_closed_form(&x));
}

#[test]
fn closed_form_at_stated_psi_differs_from_published_assembly() {
    let x = int(27) * rat(-1, 100);
    assert_ne!(pair_weights(SchemeId::straight(4, Variant::Opti).unwrap()), me4_closed_form(&x));
}

#[test]
fn assembled_family_matches_closed_form_for_arbitrary_psi() {
    for (a, b) in [(rat(1, 7), rat(-2, 9)), (rat(0, 1), rat(3, 11)), (rat(-5, 3), rat(1, 2))] {
        let d0 = derive_midpoint_family(4, HalfOffset::level(0), &a).unwrap();
        let d1 = derive_midpoint_family(4, HalfOffset::level(1), &b).unwrap();
        let mut c = catalog(SchemeId::straight(4, Variant::Opti).unwrap()).unwrap();
        c.derivatives = vec![d0, d1];
        let w = coeffs::symmetric_pair_weights(&coeffs::assembled_straight_weights(&c));
        assert_eq!(w, me4_closed_form(&(int(27) * &a - &b)));
    }
}

// published parametric closed form in Y = 2250ϑ_{1/2} - 125ϑ_{3/2} + 9ϑ_{5/2}; the
// last denominator is 13440 where the printed form has 5760
fn me6_closed_form(y: &Rat, last_den: i64) -> Vec<Rat> {
    vec![
        (int(2997) + int(112) * y) / int(960) / int(2),
        (int(-693) - int(112) * y) / int(960) / int(4),
        (int(799) + int(336) * y) / int(6720) / int(6),
        (int(-117) - int(112) * y) / int(last_den) / int(8),
    ]
}

#[test]
fn assembled_me6_opti_matches_closed_form() {
    let y = int(2250) * rat(3, 1250) - int(125) * rat(-1, 1250) + int(9) * rat(3, 625);
    let w = pair_weights(SchemeId::straight(6, Variant::Opti).unwrap());
    assert_eq!(w, me6_closed_form(&y, 13440));
    assert_ne!(w, me6_closed_form(&y, 5760));
    // consistency: a second-derivative operator has Σ m² w_m = 1
    let s = w
        .iter()
        .enumerate()
        .fold(Rat::zero(), |a, (m, x)| a + x * int(((m + 1) * (m + 1)) as i64));
    assert_eq!(s, Rat::one());
}

#[test]
fn baseline_assembly_matches_closed_form_symbols() {
    // k*_xx = c0 + Σ c_m cos(mk)  =>  pair weight w_m = c_m / 2
    let me4 = [rat(87, 32), rat(-3, 16), rat(1, 288)];
    let w = pair_weights(SchemeId::straight(4, Variant::Base).unwrap());
    assert_eq!(w, me4.iter().map(|c| c / int(2)).collect::<Vec<_>>());
    let me6 = [
        rat(12505, 4096),
        rat(-335, 1024),
        rat(2245, 73728),
        rat(-5, 4096),
        rat(9, 204800),
    ];
    let w = pair_weights(SchemeId::straight(6, Variant::Base).unwrap());
    assert_eq!(w, me6.iter().map(|c| c / int(2)).collect::<Vec<_>>());
}

#[test]
fn baseline_midpoint_examples() {
    let s = baseline_midpoint(4, HalfOffset::level(0)).unwrap();
    // (9/8)(φ_{j+1} - φ_j) + (-1/8)/3 (φ_{j+2} - φ_{j-1})
    assert_eq!(s.weight(1), rat(9, 8));
    assert_eq!(s.weight(0), rat(-9, 8));
    assert_eq!(s.weight(2), rat(-1, 24));
    assert_eq!(s.weight(-1), rat(1, 24));
    assert_eq!(s.formal_order, 4);
}

#[test]
fn regeneration_is_fast() {
    let t = std::time::Instant::now();
    for order in [4, 6] {
        let psi = coeffs::table_leading_errors(order).unwrap();
        for (lev, p) in psi.iter().enumerate() {
            derive_midpoint_family(order, HalfOffset::level(lev), p).unwrap();
        }
    }
    assert!(t.elapsed().as_secs_f64() < 1.0);
}
