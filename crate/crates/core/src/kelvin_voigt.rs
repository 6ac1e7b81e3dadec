//! Fractional Kelvin-Voigt constitutive law: a spring `E∞` in parallel with
//! a Scott-Blair element `Eα D^α`.

use std::f64::consts::FRAC_PI_2;

use statrs::function::gamma::gamma;

use crate::error::{domain, input, Result};
use crate::integrator::l1;

/// Material constants. `e_r = e_alpha / e_inf` is derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    e_inf: f64,
    e_alpha: f64,
    alpha: f64,
}

impl MaterialParams {
    pub fn new(e_inf: f64, e_alpha: f64, alpha: f64) -> Result<Self> {
        if !(e_inf.is_finite() && e_inf > 0.0) {
            return Err(domain(format!("E_inf must be positive, got {e_inf}")));
        }
        if !(e_alpha.is_finite() && e_alpha >= 0.0) {
            return Err(domain(format!(
                "E_alpha must be non-negative, got {e_alpha}"
            )));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(format!(
                "fractional order must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(Self {
            e_inf,
            e_alpha,
            alpha,
        })
    }

    /// Dimensionless form with `E∞ = 1`, as used by the beam equations.
    pub fn from_ratio(e_r: f64, alpha: f64) -> Result<Self> {
        Self::new(1.0, e_r, alpha)
    }

    pub fn e_inf(&self) -> f64 {
        self.e_inf
    }

    pub fn e_alpha(&self) -> f64 {
        self.e_alpha
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn e_r(&self) -> f64 {
        self.e_alpha / self.e_inf
    }

    /// True when the Scott-Blair element is a plain dashpot.
    pub fn is_classical(&self) -> bool {
        self.alpha == 1.0
    }
}

/// Storage and loss moduli at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexModulus {
    pub storage: f64,
    pub loss: f64,
}

impl ComplexModulus {
    pub fn tan_delta(&self) -> f64 {
        self.loss / self.storage
    }
}

/// `G*(ω) = E∞ + Eα (iω)^α`, split into real (storage) and imaginary (loss)
/// parts.
pub fn complex_modulus(mat: &MaterialParams, omega: f64) -> Result<ComplexModulus> {
    check_frequency(omega)?;
    let (sin, cos) = phase(mat.alpha);
    let scaled = mat.e_alpha * omega.powf(mat.alpha);
    Ok(ComplexModulus {
        storage: mat.e_inf + scaled * cos,
        loss: scaled * sin,
    })
}

/// `tan δ = G″ / G′ = E_r ω^α sin(απ/2) / (1 + E_r ω^α cos(απ/2))`.
pub fn tangent_loss(mat: &MaterialParams, omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    let (sin, cos) = phase(mat.alpha);
    let scaled = mat.e_r() * omega.powf(mat.alpha);
    Ok(scaled * sin / (1.0 + scaled * cos))
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("frequency must be positive, got {omega}")))
    }
}

// sin/cos of απ/2, exact at α = 1.
pub(crate) fn phase(alpha: f64) -> (f64, f64) {
    if alpha == 1.0 {
        (1.0, 0.0)
    } else {
        (alpha * FRAC_PI_2).sin_cos()
    }
}

/// A prescribed strain history starting from a quiescent state.
#[derive(Debug, Clone, PartialEq)]
pub enum StrainProgram {
    /// `ε = rate·t` up to `t_ramp`, then held at `rate·t_ramp`.
    RampHold { rate: f64, t_ramp: f64 },
    /// Strain samples on the uniform grid `t_k = k·dt`.
    Sampled { dt: f64, values: Vec<f64> },
}

impl StrainProgram {
    pub fn ramp_hold(rate: f64, t_ramp: f64) -> Result<Self> {
        if !rate.is_finite() {
            return Err(input("ramp rate must be finite"));
        }
        if !(t_ramp.is_finite() && t_ramp > 0.0) {
            return Err(input(format!("hold onset must be positive, got {t_ramp}")));
        }
        Ok(Self::RampHold { rate, t_ramp })
    }

    pub fn sampled(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(input(format!("time step must be positive, got {dt}")));
        }
        if values.len() < 2 {
            return Err(input("a sampled strain program needs at least two samples"));
        }
        if values[0] != 0.0 {
            return Err(input("strain history must start from zero"));
        }
        Ok(Self::Sampled { dt, values })
    }

    /// Strain at time `t`.
    pub fn strain(&self, t: f64) -> f64 {
        match self {
            Self::RampHold { rate, t_ramp } => rate * t.clamp(0.0, *t_ramp),
            Self::Sampled { dt, values } => {
                let x = (t / dt).max(0.0);
                let k = x.floor() as usize;
                if k + 1 >= values.len() {
                    return *values.last().unwrap();
                }
                let w = x - k as f64;
                values[k] * (1.0 - w) + values[k + 1] * w
            }
        }
    }

    /// Samples the program on `t_k = k·dt`, `k = 0..=n`.
    pub fn sample(&self, dt: f64, n: usize) -> Result<Self> {
        let values = (0..=n).map(|k| self.strain(k as f64 * dt)).collect();
        Self::sampled(dt, values)
    }
}

/// Closed-form stress of the fractional Kelvin-Voigt model under a
/// ramp-hold strain.
///
/// The start is quiescent, so `σ(0) = 0` for every order, including the
/// dashpot limit `α = 1` where the rate step would otherwise give `Eα·rate`.
pub fn ramp_hold_stress(mat: &MaterialParams, rate: f64, t_ramp: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain(format!("time must be non-negative, got {t}")));
    }
    if !(t_ramp > 0.0) {
        return Err(domain(format!("hold onset must be positive, got {t_ramp}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let elastic = mat.e_inf * rate * t.min(t_ramp);
    let viscous = if mat.is_classical() {
        if t < t_ramp {
            mat.e_alpha * rate
        } else {
            0.0
        }
    } else {
        let p = 1.0 - mat.alpha;
        let g = gamma(2.0 - mat.alpha);
        if t < t_ramp {
            mat.e_alpha * rate * t.powf(p) / g
        } else {
            mat.e_alpha * rate * (t.powf(p) - (t - t_ramp).powf(p)) / g
        }
    };
    Ok(elastic + viscous)
}

/// Stress on the grid of a sampled strain program: the elastic part is
/// exact, the fractional part uses the L1 scheme (backward difference for
/// `α = 1`).
pub fn stress_history_l1(mat: &MaterialParams, program: &StrainProgram) -> Result<Vec<f64>> {
    let (dt, values) = match program {
        StrainProgram::Sampled { dt, values } => (*dt, values),
        StrainProgram::RampHold { .. } => {
            return Err(input("stress_history_l1 needs a sampled strain program"))
        }
    };
    if values.len() < 2 {
        return Err(input("a sampled strain program needs at least two samples"));
    }
    let frac = if mat.is_classical() {
        let mut d = vec![0.0; values.len()];
        for k in 1..values.len() {
            d[k] = (values[k] - values[k - 1]) / dt;
        }
        d
    } else {
        l1::derivative_series(values, dt, mat.alpha)?
    };
    Ok(values
        .iter()
        .zip(&frac)
        .map(|(e, d)| mat.e_inf * e + mat.e_alpha * d)
        .collect())
}
