//! Flexible-brush formulas checked against independent routes: a shooting
//! solution of the cantilever boundary value problem, cubic interpolation of
//! the deflection, and direct substitution into the forced oscillator.

use std::f64::consts::{FRAC_PI_2, PI};

use brushbot_core::regime1::*;
use brushbot_core::sweep::log_grid;
use brushbot_core::{BrushParams, MotorParams};
use proptest::prelude::*;

/// Integrates `v'''' = 0` from the clamp with RK4 on `[v, v', v'', v''']`.
fn integrate_beam(y0: [f64; 4], length: f64, steps: usize) -> [f64; 4] {
    let f = |y: [f64; 4]| [y[1], y[2], y[3], 0.0];
    let h = length / steps as f64;
    let mut y = y0;
    for _ in 0..steps {
        let add = |y: [f64; 4], k: [f64; 4], s: f64| std::array::from_fn(|i| y[i] + s * k[i]);
        let k1 = f(y);
        let k2 = f(add(y, k1, h / 2.0));
        let k3 = f(add(y, k2, h / 2.0));
        let k4 = f(add(y, k3, h));
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    y
}

/// Shooting on the unknown `v''(0), v'''(0)` so that `v''(l) = 0` and
/// `EI v'''(l) = F cos(alpha)`, then integrating to `xi`.
fn shooting_deflection(ei: f64, length: f64, alpha: f64, force: f64, xi: f64) -> f64 {
    let ya = integrate_beam([0.0, 0.0, 1.0, 0.0], length, 1000);
    let yb = integrate_beam([0.0, 0.0, 0.0, 1.0], length, 1000);
    let rhs = force * alpha.cos() / ei;
    // a * ya[2] + b * yb[2] = 0,  a * ya[3] + b * yb[3] = rhs
    let det = ya[2] * yb[3] - yb[2] * ya[3];
    let a = (0.0 * yb[3] - yb[2] * rhs) / det;
    let b = (ya[2] * rhs - ya[3] * 0.0) / det;
    if xi == 0.0 {
        return 0.0;
    }
    integrate_beam([0.0, 0.0, a, b], xi, 1000)[0]
}

/// Coefficients `[c0, c1, c2, c3]` of the cubic through four samples of the
/// deflection, by Newton divided differences.
fn fit_cubic(brush: &BrushParams, force: f64) -> [f64; 4] {
    let l = brush.length();
    let xs = [0.0, l / 3.0, 2.0 * l / 3.0, l];
    let mut d: Vec<f64> = xs.iter().map(|&x| beam_deflection(brush, force, x).unwrap()).collect();
    for j in 1..4 {
        for i in (j..4).rev() {
            d[i] = (d[i] - d[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    // expand d0 + d1 (x - x0) + d2 (x - x0)(x - x1) + d3 (x - x0)(x - x1)(x - x2)
    let (x1, x2) = (xs[1], xs[2]);
    [d[0], d[1] - d[2] * x1 + d[3] * x1 * x2, d[2] - d[3] * (x1 + x2), d[3]]
}

#[test]
fn closed_form_matches_shooting_solution() {
    // EI = 1, l = 1, alpha = 0, F = 6 at the tip gives -2
    let oracle = shooting_deflection(1.0, 1.0, 0.0, 6.0, 1.0);
    assert!((oracle + 2.0).abs() < 1e-10, "{oracle}");

    let brush = BrushParams::new(1.0, 1.0, 1.0, 1e-12, 1.0).unwrap();
    assert!((beam_deflection(&brush, 6.0, 1.0).unwrap() + 2.0).abs() < 1e-12);

    let brush = BrushParams::new(2e9, 1e-12, 0.02, 0.6, 1e-3).unwrap();
    for xi in [0.0, 0.004, 0.011, 0.02] {
        let f = 0.03;
        let oracle = shooting_deflection(brush.flexural_rigidity(), 0.02, 0.6, f, xi);
        let v = beam_deflection(&brush, f, xi).unwrap();
        assert!(
            (v - oracle).abs() <= 1e-9 * oracle.abs().max(1e-12),
            "xi = {xi}: {v} vs {oracle}"
        );
    }
}

#[test]
fn tip_displacement_agrees_with_deflection_at_tip() {
    for alpha in [1e-9, PI / 3.0] {
        let brush = BrushParams::new(1.0, 1.0, 1.0, alpha, 1.0).unwrap();
        let tip = beam_deflection(&brush, 3.0, 1.0).unwrap().abs();
        assert!((tip_displacement(&brush, 3.0) - tip).abs() < 1e-12);
    }
}

#[test]
fn stiffness_monotone_in_alpha() {
    let alphas: Vec<f64> = (1..=40).map(|i| i as f64 * (FRAC_PI_2 / 41.0)).collect();
    let base = BrushParams::new(1e9, 1e-12, 0.03, 0.5, 1e-3).unwrap();
    let ks: Vec<f64> = alphas
        .iter()
        .map(|&a| lumped_stiffness(&base.with_alpha(a).unwrap()))
        .collect();
    assert!(ks.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn return_time_monotone_in_mass_length_and_rigidity() {
    let base = BrushParams::new(1e9, 1e-12, 0.03, 0.5, 1e-3).unwrap();
    let grid: Vec<f64> = (1..=25).map(|i| i as f64).collect();
    let by = |f: &dyn Fn(f64) -> BrushParams| -> Vec<f64> { grid.iter().map(|&s| return_time(&f(s))).collect() };

    let mass = by(&|s| base.with_brush_mass(1e-4 * s).unwrap());
    assert!(mass.windows(2).all(|w| w[0] < w[1]));
    let length = by(&|s| base.with_length(0.002 * s).unwrap());
    assert!(length.windows(2).all(|w| w[0] < w[1]));
    let rigidity = by(&|s| base.with_flexural_rigidity(1e-4 * s).unwrap());
    assert!(rigidity.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn amplitude_sweep_peaks_at_grid_points_around_resonance() {
    let brush = BrushParams::new(2e9, 1e-12, 0.02, 0.6, 1e-3).unwrap();
    let wn = natural_frequency(&brush);
    let motor = MotorParams::new(1e-4, 1e-3, wn).unwrap();
    let mut best: Option<(f64, f64)> = None;
    let grid = log_grid(0.1 * wn, 10.0 * wn, 301);
    for &w in &grid {
        if let Ok(a) = forced_amplitude(&brush, &motor.with_omega(w).unwrap()) {
            if best.is_none_or(|(_, b)| a.abs() > b) {
                best = Some((w, a.abs()));
            }
        }
    }
    let below = grid
        .iter()
        .copied()
        .rfind(|&w| w < wn * (1.0 - RESONANCE_GUARD))
        .unwrap();
    let above = grid
        .iter()
        .copied()
        .find(|&w| w > wn * (1.0 + RESONANCE_GUARD))
        .unwrap();
    let (arg, _) = best.unwrap();
    assert!(arg == below || arg == above, "{arg} not adjacent to {wn}");
}

fn brush_strategy() -> impl Strategy<Value = BrushParams> {
    (
        1e6..2e11f64,
        1e-16..1e-10f64,
        1e-3..0.1f64,
        0.01..(FRAC_PI_2 - 0.01),
        1e-5..1e-2f64,
    )
        .prop_map(|(e, i, l, a, mb)| BrushParams::new(e, i, l, a, mb).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #[test]
    fn boundary_conditions_hold(brush in brush_strategy(), force in -1.0..1.0f64) {
        prop_assume!(force.abs() > 1e-9);
        let ei = brush.flexural_rigidity();
        let l = brush.length();
        let fc = force * brush.alpha().cos();
        let [c0, c1, c2, c3] = fit_cubic(&brush, force);
        let slope_scale = (fc * l * l / ei).abs();

        prop_assert_eq!(beam_deflection(&brush, force, 0.0).unwrap(), 0.0);
        prop_assert!(c0.abs() <= 1e-12 * (fc * l.powi(3) / ei).abs());
        prop_assert!(c1.abs() <= 1e-6 * slope_scale);

        // second-order one-sided difference at the clamp
        let h = 1e-6 * l;
        let v = |x: f64| beam_deflection(&brush, force, x).unwrap();
        let fd = (-3.0 * v(0.0) + 4.0 * v(h) - v(2.0 * h)) / (2.0 * h);
        prop_assert!(fd.abs() <= 1e-6 * slope_scale);

        let curvature_tip = 2.0 * c2 + 6.0 * c3 * l;
        prop_assert!(curvature_tip.abs() <= 1e-6 * (fc * l / ei).abs());
        prop_assert!(rel(ei * 6.0 * c3, fc) <= 1e-6);
    }

    #[test]
    fn lumped_stiffness_reproduces_tip_force(brush in brush_strategy(), force in 1e-6..1.0f64) {
        let theta = tip_displacement(&brush, force) / brush.length();
        prop_assert!(rel(lumped_stiffness(&brush) * theta, force) <= 1e-12);
    }

    #[test]
    fn frequency_identities(brush in brush_strategy()) {
        let wn = natural_frequency(&brush);
        prop_assert!(rel(wn * wn * lumped_inertia(&brush), lumped_stiffness(&brush)) <= 1e-12);
        prop_assert!(rel(return_time(&brush) * wn, FRAC_PI_2) <= 1e-12);
        prop_assert_eq!(optimal_motor_speed(&brush).to_bits(), wn.to_bits());
    }

    #[test]
    fn forced_response_solves_oscillator(
        brush in brush_strategy(),
        ratio in prop_oneof![0.05..0.99f64, 1.01..20.0f64],
        m in 1e-5..1e-2f64,
        r in 1e-4..1e-2f64,
    ) {
        let wn = natural_frequency(&brush);
        let omega = ratio * wn;
        let motor = MotorParams::new(m, r, omega).unwrap();
        let amp = forced_amplitude(&brush, &motor).unwrap();
        let (inertia, stiffness) = (lumped_inertia(&brush), lumped_stiffness(&brush));
        let drive = m * omega * omega * r * brush.alpha().cos();
        let period = 2.0 * PI / omega;
        for i in 0..=400 {
            let t = 10.0 * period * i as f64 / 400.0;
            let theta = amp * (omega * t).sin();
            let theta_ddot = -omega * omega * amp * (omega * t).sin();
            let residual = inertia * theta_ddot + stiffness * theta - drive * (omega * t).sin();
            prop_assert!(residual.abs() <= 1e-8 * drive, "t = {}: residual {}", t, residual);
        }
    }

    #[test]
    fn step_is_positive_up_to_alpha(brush in brush_strategy(), frac in 1e-6..=1.0f64) {
        // choose the motor so that the stick angle is frac * alpha
        let theta = frac * brush.alpha();
        let amplitude = theta * 3.0 * brush.flexural_rigidity()
            / (brush.length().powi(2) * brush.alpha().cos());
        let omega = 50.0;
        let motor = MotorParams::new(amplitude / (omega * omega), 1.0, omega).unwrap();
        let step = step_displacement_r1(&brush, &motor);
        prop_assert!(step.delta > 0.0);
        prop_assert!(!step.beyond_geometry || frac >= 1.0 - 1e-12);
    }
}
