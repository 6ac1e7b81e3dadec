//! L1 discretisation of the Caputo derivative on a uniform grid.
//!
//! With `Δ_k = q_k − q_{k−1}` and `b_j = (j+1)^{1−α} − j^{1−α}`,
//!
//! ```text
//! D^α q(t_n) ≈ dt^{−α} / Γ(2−α) · Σ_{j=0}^{n−1} b_j Δ_{n−j}
//! ```
//!
//! which is exact for piecewise-linear data and of order `2 − α` otherwise.

use statrs::function::gamma::gamma;

use crate::error::{domain, Error, Result};

fn check_order(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "L1 weights need 0 < alpha < 1, got {alpha} (alpha = 1 is the classical derivative)"
        )))
    }
}

fn weight(j: usize, p: f64) -> f64 {
    if j == 0 {
        1.0
    } else {
        // (j+1)^p − j^p without cancellation for large j
        let jf = j as f64;
        jf.powf(p) * (p * (1.0 / jf).ln_1p()).exp_m1()
    }
}

/// L1 weights `b_0..b_{n−1}`.
pub fn l1_weights(alpha: f64, n: usize) -> Result<Vec<f64>> {
    check_order(alpha)?;
    if n == 0 {
        return Err(domain("need at least one L1 weight"));
    }
    let p = 1.0 - alpha;
    Ok((0..n).map(|j| weight(j, p)).collect())
}

/// `dt^{−α} / Γ(2−α)`.
pub fn l1_scale(dt: f64, alpha: f64) -> f64 {
    dt.powf(-alpha) / gamma(2.0 - alpha)
}

/// L1 approximation of the Caputo derivative at the last sample `t_n`.
pub fn caputo_l1(samples: &[f64], dt: f64, alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    if samples.len() < 2 {
        return Err(Error::InsufficientHistory);
    }
    if !(dt > 0.0) {
        return Err(domain(format!("time step must be positive, got {dt}")));
    }
    let n = samples.len() - 1;
    let b = l1_weights(alpha, n)?;
    let sum: f64 = (0..n)
        .map(|j| b[j] * (samples[n - j] - samples[n - j - 1]))
        .sum();
    Ok(l1_scale(dt, alpha) * sum)
}

/// L1 derivative at every grid node (zero at `t_0`).
pub fn derivative_series(samples: &[f64], dt: f64, alpha: f64) -> Result<Vec<f64>> {
    check_order(alpha)?;
    if samples.len() < 2 {
        return Err(Error::InsufficientHistory);
    }
    let mut hist = L1History::new(alpha, dt, samples.len() - 1)?;
    let mut out = Vec::with_capacity(samples.len());
    out.push(0.0);
    for w in samples.windows(2) {
        out.push(hist.derivative_with(w[1] - w[0]));
        hist.push(w[1] - w[0]);
    }
    Ok(out)
}

/// Running increment buffer for step-by-step integration.
///
/// `derivative_with(Δ)` returns the L1 derivative at the next node if the
/// next increment were `Δ`; the past contribution is cached per step.
#[derive(Debug, Clone)]
pub struct L1History {
    weights: Vec<f64>,
    increments: Vec<f64>,
    scale: f64,
    memory: f64,
}

impl L1History {
    pub fn new(alpha: f64, dt: f64, max_steps: usize) -> Result<Self> {
        let weights = l1_weights(alpha, max_steps + 1)?;
        Ok(Self {
            weights,
            increments: Vec::with_capacity(max_steps),
            scale: l1_scale(dt, alpha),
            memory: 0.0,
        })
    }

    /// Coefficient multiplying the unknown increment, `b_0 · scale`.
    pub fn leading(&self) -> f64 {
        self.scale
    }

    /// Past contribution `scale · Σ_{j≥1} b_j Δ_{n+1−j}` for the next node.
    pub fn memory(&self) -> f64 {
        self.memory
    }

    pub fn derivative_with(&self, increment: f64) -> f64 {
        self.scale * increment + self.memory
    }

    pub fn push(&mut self, increment: f64) {
        self.increments.push(increment);
        let n = self.increments.len();
        // next node n+1: Σ_{j=1}^{n} b_j Δ_{n+1−j}
        let mut s = 0.0;
        assert!(
            n < self.weights.len(),
            "L1 history exceeded its step budget"
        );
        for (b, d) in self.weights[1..=n].iter().zip(self.increments.iter().rev()) {
            s += b * d;
        }
        self.memory = self.scale * s;
    }
}
