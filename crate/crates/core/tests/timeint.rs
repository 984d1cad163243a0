use mevisc::operators::{fill_in_place, FillPolicy, ViscousOperator};
use mevisc::timeint::{self, euler_step, Rk3, TimeStepPolicy};
use mevisc::SchemeId;
use std::f64::consts::PI;

fn sid(s: &str) -> SchemeId {
    s.parse().unwrap()
}

fn decay_error(steps: usize) -> f64 {
    let dt = 1.0 / steps as f64;
    let mut u = vec![1.0];
    let mut rk = Rk3::new();
    for _ in 0..steps {
        rk.step(&mut u, dt, |u, r| {
            r[0] = -u[0];
            Ok(())
        })
        .unwrap();
    }
    (u[0] - (-1.0f64).exp()).abs()
}

#[test]
fn rk3_is_third_order() {
    let e: Vec<f64> = [10, 20, 40, 80].iter().map(|&n| decay_error(n)).collect();
    for w in e.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 8.0).abs() < 0.5, "ratio {ratio}");
    }
}

#[test]
fn published_amplification_constants() {
    let d4 = timeint::amplification_bound(sid("me4-opti")).unwrap();
    let d6 = timeint::amplification_bound(sid("me6-opti")).unwrap();
    assert!((d4 - 3.63).abs() < 0.01, "{d4}");
    assert!((d6 - 3.90).abs() < 0.01, "{d6}");
    for s in ["me4-opti", "me6-opti"] {
        let (k, _) = timeint::amplification_bound_at(sid(s)).unwrap();
        assert!((k - PI).abs() < 1e-12, "{s} maximizes at {k}");
    }
    let d = timeint::amplification_bound(sid("me4-base")).unwrap();
    assert!((d - 49.0 / 18.0).abs() < 1e-12, "{d}");
}

fn diffusion_run(scheme: &str, factor: f64, steps: usize, rk3: bool) -> Vec<f64> {
    let op = ViscousOperator::new(sid(scheme)).unwrap();
    let d = timeint::amplification_bound(sid(scheme)).unwrap();
    let n = 64;
    let dx = 1.0 / n as f64;
    let g = op.ghost_width();
    let dt = factor * dx * dx / d;
    // includes the odd-even mode
    let mut u: Vec<f64> = (0..n).map(|i| ((i * 29) % 13) as f64 / 13.0 - 0.5).collect();
    let mu = vec![1.0; n + 2 * g];
    let mut pad = vec![0.0; n + 2 * g];
    let mut res = |u: &[f64], r: &mut [f64]| {
        pad[g..g + n].copy_from_slice(u);
        fill_in_place(&mut pad, g, FillPolicy::Periodic)?;
        op.straight_line(&pad, &mu, g, dx, r);
        Ok(())
    };
    let mut maxes = vec![u.iter().fold(0.0f64, |a, v| a.max(v.abs()))];
    let mut rk = Rk3::new();
    for _ in 0..steps {
        if rk3 {
            rk.step(&mut u, dt, &mut res).unwrap();
        } else {
            euler_step(&mut u, dt, &mut res).unwrap();
        }
        maxes.push(u.iter().fold(0.0f64, |a, v| a.max(v.abs())));
    }
    maxes
}

#[test]
fn forward_euler_bound_is_sharp() {
    for s in ["me4-opti", "me6-opti"] {
        let below = diffusion_run(s, 0.99, 10_000, false);
        assert!(below.last().unwrap() <= &below[0]);
        let above = diffusion_run(s, 1.05, 2_000, false);
        assert!(above.last().unwrap() > &1e10, "{s}: {}", above.last().unwrap());
    }
}

#[test]
fn rk3_diffusion_below_bound_is_monotone() {
    let m = diffusion_run("me4-opti", 0.99, 1000, true);
    assert!(m.windows(2).all(|w| w[1] <= w[0] + 1e-14));
}

#[test]
fn stable_dt_is_monotone_in_spacing() {
    let p = TimeStepPolicy::new(0.5, 3.63).unwrap();
    let u = [0.3, -0.7, 0.1];
    let c = [1.0, 1.2, 0.9];
    let mu = [1e-3, 2e-3, 5e-4];
    let mut last = f64::INFINITY;
    for h in [0.2, 0.1, 0.05, 0.01, 0.001] {
        let dt = timeint::stable_dt(&[h, h], &[&u, &u], &c, &mu, &p).unwrap();
        assert!(dt <= last);
        last = dt;
    }
}
