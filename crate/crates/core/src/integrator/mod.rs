//! Time stepping of the single-mode oscillators.
//!
//! Inertia is advanced with the Newmark average-acceleration rule
//! (`γ = 1/2`, `β = 1/4`) and the fractional damping term with the L1
//! scheme of [`l1`]. At `α = 1` the damping term uses the velocity directly,
//! which reduces to the classical viscous oscillator.

mod envelope;
pub mod l1;

pub use envelope::{envelope_fit, envelope_fit_series, EnvelopeFit, EnvelopeSource};
pub use l1::{caputo_l1, l1_weights};

use crate::error::{domain, input, Error, Result};
use crate::kelvin_voigt::MaterialParams;
use crate::modal::ModalCoefficients;
use l1::L1History;

const NEWMARK_GAMMA: f64 = 0.5;
const NEWMARK_BETA: f64 = 0.25;

const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 50;

/// Uniform time grid `t_k = k·dt`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub dt: f64,
    pub n_steps: usize,
}

impl GridSpec {
    pub fn new(dt: f64, n_steps: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(domain(format!("time step must be positive, got {dt}")));
        }
        if n_steps == 0 {
            return Err(input("grid needs at least one step"));
        }
        Ok(Self { dt, n_steps })
    }

    /// Grid covering `[0, t_end]` with the step rounded to the nearest count.
    pub fn with_end(dt: f64, t_end: f64) -> Result<Self> {
        if !(t_end > 0.0) {
            return Err(domain(format!("end time must be positive, got {t_end}")));
        }
        Self::new(dt, (t_end / dt).round().max(1.0) as usize)
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n_steps)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|k| self.time(k)).collect()
    }
}

/// `amplitude · cos(frequency · t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl Harmonic {
    pub fn new(amplitude: f64, frequency: f64, phase: f64) -> Self {
        Self {
            amplitude,
            frequency,
            phase,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.amplitude * (self.frequency * t + self.phase).cos()
    }
}

/// Right-hand side of the linear oscillator.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Forcing {
    #[default]
    None,
    Harmonic(Harmonic),
    /// One value per grid node.
    Sampled(Vec<f64>),
}

impl Forcing {
    fn at(&self, grid: &GridSpec, k: usize) -> f64 {
        match self {
            Forcing::None => 0.0,
            Forcing::Harmonic(h) => h.value(grid.time(k)),
            Forcing::Sampled(v) => v[k],
        }
    }

    fn check(&self, grid: &GridSpec) -> Result<()> {
        match self {
            Forcing::Sampled(v) if v.len() != grid.n_steps + 1 => Err(input(format!(
                "sampled forcing has {} values, grid has {} nodes",
                v.len(),
                grid.n_steps + 1
            ))),
            _ => Ok(()),
        }
    }
}

/// `q̈ + E_r·c_l·D^α q + k_l·q = F(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearOscillator {
    pub c_l: f64,
    pub k_l: f64,
    pub e_r: f64,
    pub alpha: f64,
}

impl LinearOscillator {
    pub fn new(c_l: f64, k_l: f64, e_r: f64, alpha: f64) -> Result<Self> {
        if !(k_l > 0.0) {
            return Err(domain(format!("stiffness must be positive, got {k_l}")));
        }
        if !(c_l >= 0.0) || !(e_r >= 0.0) {
            return Err(domain(
                "damping coefficient and modulus ratio must be non-negative",
            ));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(format!(
                "fractional order must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(Self {
            c_l,
            k_l,
            e_r,
            alpha,
        })
    }

    fn damping(&self) -> f64 {
        self.e_r * self.c_l
    }

    /// Mechanical energy `v²/2 + k_l q²/2`.
    pub fn energy(&self, q: f64, v: f64) -> f64 {
        0.5 * (v * v + self.k_l * q * q)
    }
}

/// Sampled displacement, velocity and acceleration on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: GridSpec,
    pub q: Vec<f64>,
    pub v: Vec<f64>,
    pub a: Vec<f64>,
    /// Parameter echo for output provenance.
    pub metadata: Vec<(String, f64)>,
}

impl Trajectory {
    fn with_capacity(grid: GridSpec) -> Self {
        let n = grid.n_steps + 1;
        Self {
            grid,
            q: Vec::with_capacity(n),
            v: Vec::with_capacity(n),
            a: Vec::with_capacity(n),
            metadata: Vec::new(),
        }
    }

    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    fn push(&mut self, q: f64, v: f64, a: f64) {
        self.q.push(q);
        self.v.push(v);
        self.a.push(a);
    }
}

fn check_initial(q0: f64, v0: f64) -> Result<()> {
    if q0.is_finite() && v0.is_finite() {
        Ok(())
    } else {
        Err(domain("initial state must be finite"))
    }
}

/// Newmark predictor pieces shared by both integrators.
struct Predictor {
    qp: f64,
    vp: f64,
}

impl Predictor {
    fn new(q: f64, v: f64, a: f64, dt: f64) -> Self {
        Self {
            qp: q + dt * v + dt * dt * (0.5 - NEWMARK_BETA) * a,
            vp: v + dt * (1.0 - NEWMARK_GAMMA) * a,
        }
    }

    fn accel(&self, q: f64, dt: f64) -> f64 {
        (q - self.qp) / (NEWMARK_BETA * dt * dt)
    }

    fn velocity(&self, a: f64, dt: f64) -> f64 {
        self.vp + NEWMARK_GAMMA * dt * a
    }
}

/// Integrates the linear oscillator from `(q0, v0)`.
pub fn integrate_linear(
    osc: &LinearOscillator,
    q0: f64,
    v0: f64,
    grid: GridSpec,
    forcing: &Forcing,
) -> Result<Trajectory> {
    check_initial(q0, v0)?;
    forcing.check(&grid)?;
    let dt = grid.dt;
    let cd = osc.damping();
    let classical = osc.alpha == 1.0;
    // without damping the memory term drops out entirely
    let mut hist = if classical || cd == 0.0 {
        None
    } else {
        Some(L1History::new(osc.alpha, dt, grid.n_steps)?)
    };

    let mut traj = Trajectory::with_capacity(grid);
    // Caputo derivative of the initial state vanishes; the classical one is v0.
    let d0 = if classical { v0 } else { 0.0 };
    let a0 = forcing.at(&grid, 0) - osc.k_l * q0 - cd * d0;
    traj.push(q0, v0, a0);

    let inertia = 1.0 / (NEWMARK_BETA * dt * dt);
    let (mut q, mut v, mut a) = (q0, v0, a0);
    for k in 1..=grid.n_steps {
        let pred = Predictor::new(q, v, a, dt);
        let f = forcing.at(&grid, k);
        let q1 = match hist.as_mut() {
            Some(h) => {
                let lead = inertia + cd * h.leading() + osc.k_l;
                let rhs = f + inertia * pred.qp - cd * (h.memory() - h.leading() * q);
                rhs / lead
            }
            None => {
                let g = NEWMARK_GAMMA / (NEWMARK_BETA * dt);
                let lead = inertia + cd * g + osc.k_l;
                let rhs = f + inertia * pred.qp - cd * (pred.vp - g * pred.qp);
                rhs / lead
            }
        };
        let a1 = pred.accel(q1, dt);
        let v1 = pred.velocity(a1, dt);
        if let Some(h) = hist.as_mut() {
            h.push(q1 - q);
        }
        if !q1.is_finite() {
            return Err(Error::StepFailure {
                step: k,
                reason: "non-finite displacement".into(),
            });
        }
        q = q1;
        v = v1;
        a = a1;
        traj.push(q, v, a);
    }
    traj.metadata = vec![
        ("c_l".into(), osc.c_l),
        ("k_l".into(), osc.k_l),
        ("e_r".into(), osc.e_r),
        ("alpha".into(), osc.alpha),
        ("dt".into(), dt),
        ("n_steps".into(), grid.n_steps as f64),
        ("q0".into(), q0),
        ("v0".into(), v0),
    ];
    Ok(traj)
}

/// Fractional derivative of `q` and of `q³` at the next node.
enum Memory {
    Fractional { q: L1History, q3: L1History },
    Classical,
}

struct NonlinearTerms<'a> {
    c: &'a ModalCoefficients,
    e_r: f64,
}

impl NonlinearTerms<'_> {
    /// Residual of the modal equation and the sum of term magnitudes.
    fn residual(&self, q: f64, v: f64, a: f64, dq: f64, dq3: f64, base: f64) -> (f64, f64) {
        let c = self.c;
        let q2 = q * q;
        let terms = [
            c.m * a,
            c.j_nl * (a * q2 + q * v * v),
            c.k_l * q,
            self.e_r * c.c_l * dq,
            2.0 * c.k_nl * q2 * q,
            0.5 * self.e_r * c.c_nl * (dq3 + 3.0 * q2 * dq),
            c.m_b * base,
        ];
        let sum: f64 = terms.iter().sum();
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        (sum, scale)
    }
}

/// Integrates the nonlinear single-mode equation
///
/// ```text
/// 𝓜q̈ + 𝓙(q̈q² + qq̇²) + 𝓚_l q + E_r𝓒_l D^α q + 2𝓚_nl q³
///     + (E_r𝓒_nl/2)(D^α q³ + 3q² D^α q) = −𝓜_b V̈_b(t)
/// ```
///
/// Each step solves a scalar equation in `q_{n+1}` by damped Newton with a
/// finite-difference Jacobian, falling back to bisection on a bracket.
pub fn integrate_nonlinear(
    coeffs: &ModalCoefficients,
    mat: &MaterialParams,
    q0: f64,
    v0: f64,
    grid: GridSpec,
    base_accel: Option<Harmonic>,
) -> Result<Trajectory> {
    check_initial(q0, v0)?;
    let dt = grid.dt;
    let alpha = mat.alpha();
    let terms = NonlinearTerms {
        c: coeffs,
        e_r: mat.e_r(),
    };
    let base = |k: usize| base_accel.map_or(0.0, |h| h.value(grid.time(k)));

    let undamped = mat.e_r() == 0.0 || (coeffs.c_l == 0.0 && coeffs.c_nl == 0.0);
    let mut mem = if mat.is_classical() || undamped {
        Memory::Classical
    } else {
        Memory::Fractional {
            q: L1History::new(alpha, dt, grid.n_steps)?,
            q3: L1History::new(alpha, dt, grid.n_steps)?,
        }
    };

    let (d0, d30) = match mem {
        Memory::Classical => (v0, 3.0 * q0 * q0 * v0),
        Memory::Fractional { .. } => (0.0, 0.0),
    };
    // residual is affine in the acceleration at t = 0
    let (r0, _) = terms.residual(q0, v0, 0.0, d0, d30, base(0));
    let a0 = -r0 / (coeffs.m + coeffs.j_nl * q0 * q0);
    if !a0.is_finite() {
        return Err(Error::StepFailure {
            step: 0,
            reason: "singular effective mass".into(),
        });
    }

    let mut traj = Trajectory::with_capacity(grid);
    traj.push(q0, v0, a0);
    let (mut q, mut v, mut a) = (q0, v0, a0);

    for k in 1..=grid.n_steps {
        let pred = Predictor::new(q, v, a, dt);
        let b = base(k);
        let q_prev = q;
        let eval = |x: f64| -> (f64, f64) {
            let ax = pred.accel(x, dt);
            let vx = pred.velocity(ax, dt);
            let (dq, dq3) = match &mem {
                Memory::Fractional { q: hq, q3: hq3 } => (
                    hq.derivative_with(x - q_prev),
                    hq3.derivative_with(x * x * x - q_prev * q_prev * q_prev),
                ),
                Memory::Classical => (vx, 3.0 * x * x * vx),
            };
            terms.residual(x, vx, ax, dq, dq3, b)
        };
        let guess = q + dt * v + 0.5 * dt * dt * a;
        let q1 = solve_step(&eval, guess, k)?;
        let a1 = pred.accel(q1, dt);
        let v1 = pred.velocity(a1, dt);
        if let Memory::Fractional { q: hq, q3: hq3 } = &mut mem {
            hq.push(q1 - q);
            hq3.push(q1 * q1 * q1 - q * q * q);
        }
        q = q1;
        v = v1;
        a = a1;
        traj.push(q, v, a);
    }
    traj.metadata = vec![
        ("m".into(), coeffs.m),
        ("j_nl".into(), coeffs.j_nl),
        ("k_l".into(), coeffs.k_l),
        ("c_l".into(), coeffs.c_l),
        ("k_nl".into(), coeffs.k_nl),
        ("c_nl".into(), coeffs.c_nl),
        ("m_b".into(), coeffs.m_b),
        ("e_r".into(), mat.e_r()),
        ("alpha".into(), alpha),
        ("dt".into(), dt),
        ("n_steps".into(), grid.n_steps as f64),
        ("q0".into(), q0),
        ("v0".into(), v0),
    ];
    Ok(traj)
}

fn converged(r: f64, scale: f64) -> bool {
    r.abs() <= NEWTON_TOL * scale.max(1.0)
}

/// Solves `eval(x).0 = 0`; `eval(x).1` is the magnitude scale used for the
/// relative convergence test.
fn solve_step<F: Fn(f64) -> (f64, f64)>(eval: &F, guess: f64, step: usize) -> Result<f64> {
    let mut x = guess;
    let (mut r, mut scale) = eval(x);
    for _ in 0..NEWTON_MAX_ITER {
        if converged(r, scale) {
            return Ok(x);
        }
        let h = 1e-7 * (1.0 + x.abs());
        let jac = (eval(x + h).0 - eval(x - h).0) / (2.0 * h);
        if !(jac.is_finite() && jac != 0.0) {
            break;
        }
        let dx = -r / jac;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let xn = x + lambda * dx;
            let (rn, sn) = eval(xn);
            if rn.is_finite() && rn.abs() < r.abs() {
                x = xn;
                r = rn;
                scale = sn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            // no descent: either at round-off level or the slope is wrong
            if (dx.abs()) <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
                return Ok(x);
            }
            break;
        }
        if dx.abs() * lambda <= f64::EPSILON * x.abs() {
            return Ok(x);
        }
    }
    if converged(r, scale) {
        return Ok(x);
    }
    bisection_fallback(eval, guess, step)
}

fn bisection_fallback<F: Fn(f64) -> (f64, f64)>(eval: &F, guess: f64, step: usize) -> Result<f64> {
    let f = |x: f64| eval(x).0;
    let mut h = 1e-6 * (1.0 + guess.abs());
    for _ in 0..80 {
        let (lo, hi) = (guess - h, guess + h);
        let (flo, fhi) = (f(lo), f(hi));
        if flo.is_finite() && fhi.is_finite() && (flo <= 0.0) != (fhi <= 0.0) {
            let x = crate::roots::bisect(f, lo, hi, 0.0);
            let (r, scale) = eval(x);
            // bisection runs to adjacent floats; accept round-off residuals
            if r.is_finite() && r.abs() <= 1e-6 * scale.max(1.0) {
                return Ok(x);
            }
            break;
        }
        h *= 2.0;
    }
    Err(Error::StepFailure {
        step,
        reason: "Newton and bisection both failed to converge".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn undamped_check(osc: LinearOscillator) {
        let grid = GridSpec::new(1e-3, 10_000).unwrap();
        let t = integrate_linear(&osc, 1.0, 0.0, grid, &Forcing::None).unwrap();
        let w = osc.k_l.sqrt();
        let exact = (w * grid.t_end()).cos();
        assert!((t.q[grid.n_steps] - exact).abs() < 1e-4);
    }

    #[test]
    fn free_undamped_oscillator_tracks_cosine() {
        undamped_check(LinearOscillator::new(0.0, 4.0, 1.0, 0.5).unwrap());
        undamped_check(LinearOscillator::new(1.0, 4.0, 0.0, 1.0).unwrap());
    }

    #[test]
    fn classical_damped_oscillator_matches_closed_form() {
        // q̈ + 2ζω q̇ + ω² q = 0 with ζ = 0.1, ω = 2
        let osc = LinearOscillator::new(0.4, 4.0, 1.0, 1.0).unwrap();
        let grid = GridSpec::new(1e-3, 5000).unwrap();
        let tr = integrate_linear(&osc, 1.0, 0.0, grid, &Forcing::None).unwrap();
        let (z, w) = (0.1f64, 2.0f64);
        let wd = w * (1.0 - z * z).sqrt();
        for k in [1000, 3000, 5000] {
            let t = grid.time(k);
            let exact = (-z * w * t).exp() * ((wd * t).cos() + z * w / wd * (wd * t).sin());
            assert!((tr.q[k] - exact).abs() < 1e-5, "t={t}");
        }
    }

    #[test]
    fn sampled_forcing_length_is_checked() {
        let osc = LinearOscillator::new(1.0, 1.0, 1.0, 0.5).unwrap();
        let grid = GridSpec::new(0.1, 10).unwrap();
        assert!(integrate_linear(&osc, 0.0, 0.0, grid, &Forcing::Sampled(vec![0.0; 3])).is_err());
    }

    #[test]
    fn zero_state_without_forcing_stays_at_rest() {
        let osc = LinearOscillator::new(1.0, 1.0, 1.0, 0.3).unwrap();
        let grid = GridSpec::new(0.01, 200).unwrap();
        let t = integrate_linear(&osc, 0.0, 0.0, grid, &Forcing::None).unwrap();
        assert!(t.q.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn nonlinear_reduces_to_linear_without_cubic_terms() {
        let coeffs = ModalCoefficients {
            m: 1.0,
            j_nl: 0.0,
            k_l: 2.0,
            c_l: 2.0,
            k_nl: 0.0,
            c_nl: 0.0,
            m_b: 1.0,
        };
        let mat = MaterialParams::from_ratio(0.3, 0.6).unwrap();
        let grid = GridSpec::new(5e-3, 2000).unwrap();
        let forcing = Harmonic::new(0.5, 1.3, 0.0);
        let nl = integrate_nonlinear(&coeffs, &mat, 0.2, 0.1, grid, Some(forcing)).unwrap();
        let osc = LinearOscillator::new(2.0, 2.0, 0.3, 0.6).unwrap();
        let neg = Harmonic::new(-0.5, 1.3, 0.0);
        let lin = integrate_linear(&osc, 0.2, 0.1, grid, &Forcing::Harmonic(neg)).unwrap();
        for k in [100, 1000, 2000] {
            assert_relative_eq!(nl.q[k], lin.q[k], epsilon = 1e-10);
        }
    }

    #[test]
    fn solver_reports_step_on_failure() {
        let err = solve_step(&|x: f64| (x * x + 1.0, 1.0), 0.0, 7).unwrap_err();
        assert!(matches!(err, Error::StepFailure { step: 7, .. }));
    }

    #[test]
    fn grid_rejects_bad_step() {
        assert!(GridSpec::new(0.0, 10).is_err());
        assert!(GridSpec::new(0.1, 0).is_err());
        assert_eq!(GridSpec::with_end(0.01, 1.0).unwrap().n_steps, 100);
    }
}
