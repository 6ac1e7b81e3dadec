//! First-order multiple-scales results for the single-mode beam equation.
//!
//! All rates are in physical time (`ε = 1`). Write `g = E_r ω₀^{α−1}` and
//! `θ = απ/2`; the fractional damping term contributes `g sin θ` to the
//! amplitude equation and `g cos θ` to the phase equation.

mod cubic;
mod sweep;

pub use cubic::{solve_steady_amplitudes, steady_state_cubic, CubicCoeffs, SteadyStateRoot};
pub use sweep::{
    frequency_sweep, parameter_sweep, Bifurcation, ResponseBranch, SweepOverrides, SweepVar,
};

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Result};
use crate::kelvin_voigt::phase;
use crate::modal::ScaledCoefficients;
use crate::quadrature::adaptive_simpson;
use crate::roots::{bisect, sign_change_brackets};

/// Which tip configuration the coefficients came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    NoTip,
    TipMass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmsParams {
    pub omega0: f64,
    pub c_l: f64,
    pub c_nl: f64,
    pub k_nl: f64,
    /// Rotatory-inertia nonlinearity, zero without a tip.
    pub m_nl: f64,
    pub e_r: f64,
    pub alpha: f64,
    /// Forcing amplitude `f` of the primary resonance.
    pub f: f64,
    pub case: CaseTag,
}

impl MmsParams {
    pub fn from_scaled(s: &ScaledCoefficients) -> Result<Self> {
        let case = if s.m_nl == 0.0 {
            CaseTag::NoTip
        } else {
            CaseTag::TipMass
        };
        let p = Self {
            omega0: s.omega0,
            c_l: s.c_l,
            c_nl: s.c_nl,
            k_nl: s.k_nl,
            m_nl: s.m_nl,
            e_r: s.e_r,
            alpha: s.alpha,
            f: s.f,
            case,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega0 > 0.0) || !self.omega0.is_finite() {
            return Err(domain(format!(
                "natural frequency must be positive, got {}",
                self.omega0
            )));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(domain(format!(
                "fractional order must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.e_r >= 0.0) {
            return Err(domain(format!(
                "modulus ratio must be non-negative, got {}",
                self.e_r
            )));
        }
        if self.case == CaseTag::NoTip && self.m_nl != 0.0 {
            return Err(domain("rotatory-inertia term must vanish without a tip"));
        }
        Ok(())
    }

    /// Same parameters with a different fractional order.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// `E_r ω₀^{α−1}`.
    fn g(&self) -> f64 {
        self.e_r * self.omega0.powf(self.alpha - 1.0)
    }

    /// `(g sin θ, g cos θ)`.
    fn damping_parts(&self) -> (f64, f64) {
        let (s, c) = phase(self.alpha);
        let g = self.g();
        (g * s, g * c)
    }

    /// Linear and cubic coefficients `(p, r)` of `da/dt = −(p a + r a³)`.
    pub fn amplitude_rates(&self) -> (f64, f64) {
        let (gs, _) = self.damping_parts();
        (0.5 * self.c_l * gs, 0.375 * self.c_nl * gs)
    }

    /// `(P, Q)` with `dφ/dt = P + Q a²`.
    pub fn phase_rates(&self) -> (f64, f64) {
        let (_, gc) = self.damping_parts();
        let p = 0.5 * self.c_l * gc;
        let q =
            0.75 * self.c_nl * gc + 0.75 * self.k_nl / self.omega0 - 0.25 * self.m_nl * self.omega0;
        (p, q)
    }
}

/// `a²(t)` from the Bernoulli solution of the amplitude equation.
fn amplitude_sq(p: f64, r: f64, a0: f64, t: f64) -> f64 {
    let a0s = a0 * a0;
    if p > 0.0 {
        let decay = (-2.0 * p * t).exp();
        p * a0s * decay / (p - r * a0s * (-2.0 * p * t).exp_m1())
    } else {
        a0s / (1.0 + 2.0 * r * a0s * t)
    }
}

/// Free-vibration amplitude and phase at time `t` from `(a0, φ0)`.
pub fn free_envelope(params: &MmsParams, a0: f64, phi0: f64, t: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if !(a0 > 0.0) || !a0.is_finite() {
        return Err(domain(format!(
            "initial amplitude must be positive, got {a0}"
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("time must be non-negative, got {t}")));
    }
    let (p, r) = params.amplitude_rates();
    let a = amplitude_sq(p, r, a0, t).sqrt();
    let (pp, qq) = params.phase_rates();
    let integral = if t == 0.0 || qq == 0.0 {
        0.0
    } else {
        let tol = 1e-13 * a0 * a0 * t;
        adaptive_simpson(&|s| amplitude_sq(p, r, a0, s), 0.0, t, tol, 50)
    };
    Ok((a, phi0 + pp * t + qq * integral))
}

/// `τ_d = c_l E_r ω₀^{α−1} sin(απ/2)`.
pub fn decay_rate(params: &MmsParams) -> f64 {
    params.c_l * params.damping_parts().0
}

/// `∂τ_d/∂α`.
pub fn sensitivity(params: &MmsParams) -> f64 {
    let (gs, gc) = params.damping_parts();
    params.c_l * (FRAC_PI_2 * gc + gs * params.omega0.ln())
}

/// `∂²τ_d/∂α²`.
pub fn sensitivity_slope(params: &MmsParams) -> f64 {
    let (gs, gc) = params.damping_parts();
    let l = params.omega0.ln();
    params.c_l * (PI * l * gc + (l * l - PI * PI / 4.0) * gs)
}

/// Root condition used by [`critical_alpha`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalMode {
    /// `∂τ_d/∂α = 0`: the order of fastest decay.
    DecayPeak,
    /// `∂²τ_d/∂α² = 0`: the order of steepest change in decay rate.
    SensitivityExtremum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalAlpha {
    pub mode: CriticalMode,
    /// First root in `(0, 2)`, if any.
    pub root: Option<f64>,
    /// The root condition evaluated at the root with full scaling.
    pub residual: Option<f64>,
    pub in_unit_interval: bool,
    /// `−(2/π) atan(π / (2 ln ω₀))` on the principal branch, reported for
    /// comparison in decay-peak mode.
    pub closed_form: Option<f64>,
}

const CRITICAL_SEARCH_MAX: f64 = 2.0;
const CRITICAL_SCAN_STEP: f64 = 1e-3;

/// Locates the critical fractional order by bisection on a sign change of
/// the chosen condition over `(0, 2)`.
///
/// The condition is divided by `c_l E_r ω₀^{α−1} > 0` before the search, so
/// the root does not depend on `c_l` or `E_r`.
pub fn critical_alpha(params: &MmsParams, mode: CriticalMode) -> Result<CriticalAlpha> {
    if !(params.omega0 > 0.0) {
        return Err(domain("natural frequency must be positive"));
    }
    let l = params.omega0.ln();
    let reduced = move |alpha: f64| {
        let (s, c) = (alpha * FRAC_PI_2).sin_cos();
        match mode {
            CriticalMode::DecayPeak => FRAC_PI_2 * c + l * s,
            CriticalMode::SensitivityExtremum => PI * l * c + (l * l - PI * PI / 4.0) * s,
        }
    };
    let brackets = sign_change_brackets(
        reduced,
        CRITICAL_SCAN_STEP,
        CRITICAL_SEARCH_MAX - CRITICAL_SCAN_STEP,
        CRITICAL_SCAN_STEP,
    );
    let root = brackets
        .first()
        .map(|&(lo, hi)| bisect(reduced, lo, hi, 0.0));
    let residual = root.map(|alpha| {
        let p = params.with_alpha(alpha);
        let (s, c) = (alpha * FRAC_PI_2).sin_cos();
        let g = p.c_l * p.e_r * p.omega0.powf(alpha - 1.0);
        match mode {
            CriticalMode::DecayPeak => g * (FRAC_PI_2 * c + l * s),
            CriticalMode::SensitivityExtremum => g * (PI * l * c + (l * l - PI * PI / 4.0) * s),
        }
    });
    let closed_form = match mode {
        CriticalMode::DecayPeak if l != 0.0 => Some(-(PI / (2.0 * l)).atan() / FRAC_PI_2),
        _ => None,
    };
    Ok(CriticalAlpha {
        mode,
        root,
        residual,
        in_unit_interval: root.is_some_and(|a| a > 0.0 && a < 1.0),
        closed_form,
    })
}

/// Decay rate at an arbitrary order, including `α > 1` for root checks.
pub fn decay_rate_at(params: &MmsParams, alpha: f64) -> f64 {
    params.c_l * params.e_r * params.omega0.powf(alpha - 1.0) * (alpha * FRAC_PI_2).sin()
}
