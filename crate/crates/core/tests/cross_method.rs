//! Agreement between independent routes to the same quantity.

use fracbeam_core::modal::ModeShape;
use fracbeam_core::*;

fn coefficients(tip: TipConfig) -> ModalCoefficients {
    let mode = ModeShape::fundamental(&tip).unwrap();
    modal_coefficients(&mode, &tip).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Explicit RK4 on the classical (α = 1) modal equation, solved for q̈.
fn rk4_classical(c: &ModalCoefficients, e_r: f64, q0: f64, v0: f64, h: f64, n: usize) -> Vec<f64> {
    let acc = |q: f64, v: f64| {
        let q2 = q * q;
        let rest = c.j_nl * q * v * v
            + c.k_l * q
            + e_r * c.c_l * v
            + 2.0 * c.k_nl * q2 * q
            + 3.0 * e_r * c.c_nl * q2 * v;
        -rest / (c.m + c.j_nl * q2)
    };
    let (mut q, mut v) = (q0, v0);
    let mut out = vec![q];
    for _ in 0..n {
        let (k1q, k1v) = (v, acc(q, v));
        let (k2q, k2v) = (v + 0.5 * h * k1v, acc(q + 0.5 * h * k1q, v + 0.5 * h * k1v));
        let (k3q, k3v) = (v + 0.5 * h * k2v, acc(q + 0.5 * h * k2q, v + 0.5 * h * k2v));
        let (k4q, k4v) = (v + h * k3v, acc(q + h * k3q, v + h * k3v));
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        out.push(q);
    }
    out
}

#[test]
fn classical_nonlinear_newmark_matches_rk4_with_tip_inertia() {
    let c = coefficients(TipConfig::new(1.0, 1.0).unwrap());
    let mat = MaterialParams::from_ratio(0.01, 1.0).unwrap();
    let (q0, dt, n) = (0.05, 1e-4, 50_000);
    let tr = integrate_nonlinear(&c, &mat, q0, 0.0, GridSpec::new(dt, n).unwrap(), None).unwrap();
    let reference = rk4_classical(&c, 0.01, q0, 0.0, dt / 10.0, 10 * n);
    let worst = (0..=n)
        .step_by(100)
        .map(|k| (tr.q[k] - reference[10 * k]).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-4 * q0, "max deviation {worst:e}");
}

#[test]
fn near_classical_order_approaches_viscous_response() {
    let grid = GridSpec::new(2e-3, 5_000).unwrap();
    let viscous = integrate_linear(
        &LinearOscillator::new(0.5, 2.0, 1.0, 1.0).unwrap(),
        1.0,
        0.0,
        grid,
        &Forcing::None,
    )
    .unwrap();
    let frac = integrate_linear(
        &LinearOscillator::new(0.5, 2.0, 1.0, 0.999).unwrap(),
        1.0,
        0.0,
        grid,
        &Forcing::None,
    )
    .unwrap();
    let worst = viscous
        .q
        .iter()
        .zip(&frac.q)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 5e-3, "{worst}");
}

#[test]
fn forced_steady_state_matches_stable_cubic_root() {
    let tip = TipConfig::no_tip();
    let c = coefficients(tip);
    let alpha = 0.5;
    let probe = MmsParams::from_scaled(
        &scale_coefficients(&c, &MaterialParams::from_ratio(1.0, alpha).unwrap(), 0.0).unwrap(),
    )
    .unwrap();
    // weak damping: E_r c_l ω₀^{α−1} = 0.05
    let e_r = 0.05 / (probe.c_l * probe.omega0.powf(alpha - 1.0));
    let (f, delta) = (0.05, -0.2);
    let mat = MaterialParams::from_ratio(e_r, alpha).unwrap();
    let params = MmsParams::from_scaled(&scale_coefficients(&c, &mat, f).unwrap()).unwrap();
    let roots = solve_steady_amplitudes(&steady_state_cubic(&params, delta).unwrap()).unwrap();
    assert_eq!(roots.len(), 1, "{roots:?} e_r={e_r}");
    let root = roots[0];

    let omega = params.omega0 + delta;
    // 𝓜_b V̈_b = −𝓜 f cos Ωt puts f cos Ωt on the right of the scaled equation
    let base = Harmonic::new(-c.m * f / c.m_b, omega, 0.0);
    let q0 = root.amp * root.gamma.cos();
    let v0 = root.amp * omega * root.gamma.sin();
    let grid = GridSpec::with_end(1e-2, 300.0).unwrap();
    let tr = integrate_nonlinear(&c, &mat, q0, v0, grid, Some(base)).unwrap();
    let tail = &tr.q[tr.q.len() * 5 / 6..];
    let amp = tail.iter().fold(0.0f64, |m, q| m.max(q.abs()));
    assert!(
        rel(amp, root.amp) < 0.05,
        "direct {amp}, multiple scales {}",
        root.amp
    );
}

#[test]
fn envelope_closed_form_matches_rk4_for_tip_mass_case() {
    let c = coefficients(TipConfig::new(1.0, 1.0).unwrap());
    let mat = MaterialParams::from_ratio(0.1, 0.6).unwrap();
    let p = MmsParams::from_scaled(&scale_coefficients(&c, &mat, 0.0).unwrap()).unwrap();
    assert_eq!(p.case, CaseTag::TipMass);
    let (pr, rr) = p.amplitude_rates();
    let (pp, qq) = p.phase_rates();
    let (a0, h, n) = (0.05, 1e-4, 40_000);
    let f = |a: f64| (-(pr * a + rr * a * a * a), pp + qq * a * a);
    let (mut a, mut phi) = (a0, 0.0);
    for _ in 0..n {
        let k1 = f(a);
        let k2 = f(a + 0.5 * h * k1.0);
        let k3 = f(a + 0.5 * h * k2.0);
        let k4 = f(a + h * k3.0);
        a += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        phi += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    let (ea, ephi) = free_envelope(&p, a0, 0.0, h * n as f64).unwrap();
    assert!(rel(ea, a) < 1e-8);
    assert!(rel(ephi, phi) < 1e-8);
}
