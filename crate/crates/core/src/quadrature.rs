//! Composite Gauss-Legendre quadrature with panel doubling.

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess for the i-th largest root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]` split into `panels` equal panels.
    pub fn composite<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let half = 0.5 * h;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(mid + half * x);
            }
            total += s * half;
        }
        total
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Settings for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    /// Points per panel.
    pub order: usize,
    /// Relative change between successive doublings that counts as converged.
    pub rel_tol: f64,
    /// Absolute floor for integrals that vanish.
    pub abs_tol: f64,
    pub max_refinements: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            order: 10,
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_refinements: 16,
        }
    }
}

/// Integrates `f` over `[a, b]`, doubling the panel count until two
/// successive estimates agree to `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadratureOptions) -> Result<f64> {
    let rule = GaussLegendre::new(opts.order);
    let mut panels = 1usize;
    let mut prev = rule.composite(&f, a, b, panels);
    for _ in 0..opts.max_refinements {
        panels *= 2;
        let next = rule.composite(&f, a, b, panels);
        if (next - prev).abs() <= opts.rel_tol * next.abs().max(prev.abs()) + opts.abs_tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature {
        refinements: opts.max_refinements,
    })
}

/// Adaptive Simpson rule with Richardson correction, to absolute tolerance
/// `tol` and recursion depth `max_depth`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_is_exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::new(5);
        let f = |x: f64| x.powi(9) + 3.0 * x.powi(8) - x.powi(3) + 2.0;
        // ∫_{-1}^{1} 3x^8 + 2 = 6/9 + 4
        assert_relative_eq!(
            rule.composite(&f, -1.0, 1.0, 1),
            6.0 / 9.0 + 4.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn weights_sum_to_two() {
        for n in 1..=20 {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights.iter().sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn adaptive_integrates_oscillatory_function() {
        let v = integrate(
            |x| (10.0 * x).sin() * x.exp(),
            0.0,
            1.0,
            &QuadratureOptions::default(),
        )
        .unwrap();
        // ∫ e^x sin(10x) = e^x (sin 10x - 10 cos 10x) / 101
        let e = std::f64::consts::E;
        let exact = (e * ((10.0f64).sin() - 10.0 * (10.0f64).cos()) + 10.0) / 101.0;
        assert_relative_eq!(v, exact, max_relative = 1e-12);
    }

    #[test]
    fn simpson_handles_smooth_decay() {
        let v = adaptive_simpson(&|x: f64| (-2.0 * x).exp(), 0.0, 5.0, 1e-13, 40);
        assert_relative_eq!(v, 0.5 * (1.0 - (-10.0f64).exp()), epsilon = 1e-12);
    }

    #[test]
    fn non_convergent_integrand_reports_error() {
        let opts = QuadratureOptions {
            max_refinements: 3,
            ..Default::default()
        };
        let err = integrate(|x: f64| 1.0 / x.abs().sqrt(), -1.0, 1.0, &opts).unwrap_err();
        assert_eq!(err, Error::Quadrature { refinements: 3 });
    }
}
