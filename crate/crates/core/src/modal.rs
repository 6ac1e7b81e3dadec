//! Cantilever eigenproblem with an optional tip mass `M` and rotatory
//! inertia `J` (both nondimensional), mode shapes and the single-mode
//! Galerkin coefficients.
//!
//! The mode shape is `X(s) = A(sin βs − sinh βs) + B(cos βs − cosh βs)`,
//! normalised so that `∫₀¹ X² ds = 1` with `A > 0`.

use crate::error::{domain, Error, Result};
use crate::kelvin_voigt::MaterialParams;
use crate::quadrature::{integrate, QuadratureOptions};
use crate::roots::{bisect, sign_change_brackets};

/// Default upper end of the eigenvalue search.
pub const DEFAULT_SEARCH_MAX: f64 = 20.0;
const SCAN_START: f64 = 0.01;
const SCAN_STEP: f64 = 0.01;

/// Which tip boundary relation the frequency equation and mode shape use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryModel {
    /// The frequency equation and `B/A` ratio behind the tabulated tip-mass
    /// coefficients (`β² = 1.38569` at `M = J = 1`). Its rotatory-inertia
    /// terms differ from the exact determinant; with `M = 0` and `J > 0` it
    /// has no real roots.
    #[default]
    Tabulated,
    /// Determinant of `X''(1) = Jω²X'(1)`, `X'''(1) = −Mω²X(1)`.
    Exact,
}

/// Lumped tip properties. `M = J = 0` is the bare cantilever, for which
/// both boundary models coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TipConfig {
    pub m_tip: f64,
    pub j_tip: f64,
    pub boundary: BoundaryModel,
}

impl TipConfig {
    pub fn new(m_tip: f64, j_tip: f64) -> Result<Self> {
        if !(m_tip >= 0.0 && j_tip >= 0.0) || !m_tip.is_finite() || !j_tip.is_finite() {
            return Err(domain(format!(
                "tip mass and rotatory inertia must be finite and non-negative, got M = {m_tip}, J = {j_tip}"
            )));
        }
        Ok(Self {
            m_tip,
            j_tip,
            boundary: BoundaryModel::default(),
        })
    }

    pub fn no_tip() -> Self {
        Self {
            m_tip: 0.0,
            j_tip: 0.0,
            boundary: BoundaryModel::default(),
        }
    }

    pub fn with_boundary(mut self, boundary: BoundaryModel) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn has_tip(&self) -> bool {
        self.m_tip != 0.0 || self.j_tip != 0.0
    }
}

fn residual_terms(beta: f64, tip: &TipConfig) -> [f64; 5] {
    let (s, c) = beta.sin_cos();
    let (sh, ch) = (beta.sinh(), beta.cosh());
    let (m, j) = (tip.m_tip, tip.j_tip);
    let b3 = beta.powi(3);
    let (j_term, mj_term) = match tip.boundary {
        BoundaryModel::Tabulated => (
            j * b3 * (s * ch - sh * ch),
            m * j * beta.powi(4) * (s * sh + c * ch - 1.0),
        ),
        BoundaryModel::Exact => (
            j * b3 * (s * ch + c * sh),
            m * j * beta.powi(4) * (c * ch - 1.0),
        ),
    };
    [
        1.0,
        c * ch,
        -m * beta * (s * ch - c * sh),
        -j_term,
        -mj_term,
    ]
}

/// Frequency-equation residual; the roots in `β` give `ω = β²`.
///
/// Without a tip this is `1 + cos β cosh β`.
pub fn characteristic_residual(beta: f64, tip: &TipConfig) -> f64 {
    residual_terms(beta, tip).iter().sum()
}

/// Sum of term magnitudes, the natural scale for the residual at `β`.
pub fn residual_scale(beta: f64, tip: &TipConfig) -> f64 {
    residual_terms(beta, tip).iter().map(|t| t.abs()).sum()
}

/// First `n_modes` roots `β_n` in increasing order, searched on `(0, search_max]`.
pub fn solve_eigen(tip: &TipConfig, n_modes: usize, search_max: f64) -> Result<Vec<f64>> {
    if n_modes == 0 {
        return Err(domain("at least one mode must be requested"));
    }
    if !(search_max > SCAN_START) {
        return Err(domain(format!(
            "search range must exceed {SCAN_START}, got {search_max}"
        )));
    }
    let f = |b: f64| characteristic_residual(b, tip);
    let brackets = sign_change_brackets(f, SCAN_START, search_max, SCAN_STEP);
    if brackets.len() < n_modes {
        return Err(Error::InsufficientRange {
            requested: n_modes,
            found: brackets.len(),
            search_max,
        });
    }
    Ok(brackets
        .into_iter()
        .take(n_modes)
        .map(|(lo, hi)| polish(&f, bisect(f, lo, hi, 1e-12), lo, hi))
        .collect())
}

/// One finite-difference Newton step, kept only if it lowers the residual.
fn polish<F: Fn(f64) -> f64>(f: &F, x: f64, lo: f64, hi: f64) -> f64 {
    let h = 1e-7 * x;
    let d = (f(x + h) - f(x - h)) / (2.0 * h);
    if d == 0.0 || !d.is_finite() {
        return x;
    }
    let xn = x - f(x) / d;
    if xn > lo && xn < hi && f(xn).abs() < f(x).abs() {
        xn
    } else {
        x
    }
}

/// A normalised mode. Evaluate with [`mode_shape_eval`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeShape {
    pub beta: f64,
    /// `B/A`.
    pub coeff_b_over_a: f64,
    /// `A`, chosen so that `∫₀¹ X² = 1`.
    pub norm: f64,
    pub tip: TipConfig,
    // 1 + B/A and 1 − B/A, computed without cancellation
    one_plus_r: f64,
    one_minus_r: f64,
}

impl ModeShape {
    pub fn new(beta: f64, tip: &TipConfig) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(domain(format!("eigenvalue must be positive, got {beta}")));
        }
        let (s, c) = beta.sin_cos();
        let (sh, ch) = (beta.sinh(), beta.cosh());
        let em = (-beta).exp();
        let j3 = tip.j_tip * beta.powi(3);
        // B/A = −N/D from the slope-moment condition at the tip
        let num = s + sh + j3 * (c - ch);
        let (den, d_minus_n) = match tip.boundary {
            BoundaryModel::Tabulated => (
                c + ch - j3 * (s - sh),
                (c - s) + em - j3 * (s + c) + j3 * beta.exp(),
            ),
            BoundaryModel::Exact => (
                c + ch - j3 * (s + sh),
                (c - s) + em - j3 * (s + c) + j3 * em,
            ),
        };
        if den == 0.0 {
            return Err(domain("mode shape ratio is singular at this eigenvalue"));
        }
        let r = -num / den;
        let mut shape = Self {
            beta,
            coeff_b_over_a: r,
            norm: 1.0,
            tip: *tip,
            one_plus_r: d_minus_n / den,
            one_minus_r: (den + num) / den,
        };
        let sq = integrate(
            |x| shape.raw(x, 0).powi(2),
            0.0,
            1.0,
            &QuadratureOptions::default(),
        )?;
        shape.norm = 1.0 / sq.sqrt();
        Ok(shape)
    }

    /// First mode of the given tip configuration.
    pub fn fundamental(tip: &TipConfig) -> Result<Self> {
        let beta = solve_eigen(tip, 1, DEFAULT_SEARCH_MAX)?[0];
        Self::new(beta, tip)
    }

    /// `ω = β²`.
    pub fn omega(&self) -> f64 {
        self.beta * self.beta
    }

    /// Unnormalised (`A = 1`) shape or derivative.
    fn raw(&self, s: f64, order: u8) -> f64 {
        let b = self.beta;
        let x = b * s;
        let (sn, cs) = x.sin_cos();
        let r = self.coeff_b_over_a;
        let (ep, em) = (x.exp(), (-x).exp());
        // sinh x + r cosh x and cosh x + r sinh x
        let h0 = 0.5 * (self.one_plus_r * ep - self.one_minus_r * em);
        let h1 = 0.5 * (self.one_plus_r * ep + self.one_minus_r * em);
        match order {
            0 => (sn + r * cs) - h0,
            1 => b * ((cs - r * sn) - h1),
            2 => b * b * (-(sn + r * cs) - h0),
            _ => b.powi(3) * (-(cs - r * sn) - h1),
        }
    }
}

/// `d^order X / ds^order` at `s`, for `order ≤ 3`.
pub fn mode_shape_eval(mode: &ModeShape, s: f64, order: u8) -> Result<f64> {
    if order > 3 {
        return Err(Error::UnsupportedDerivative(order));
    }
    if !s.is_finite() {
        return Err(domain("position must be finite"));
    }
    Ok(mode.norm * mode.raw(s, order))
}

/// Single-mode Galerkin coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalCoefficients {
    /// `∫φ² + Mφ(1)² + Jφ'(1)²`
    pub m: f64,
    /// `Jφ'(1)⁴`
    pub j_nl: f64,
    /// `∫φ''²`
    pub k_l: f64,
    pub c_l: f64,
    /// `∫φ'²φ''²`
    pub k_nl: f64,
    pub c_nl: f64,
    /// `∫φ + Mφ(1)`
    pub m_b: f64,
}

/// Projects the equation of motion onto `mode` with lumped tip `tip`.
pub fn modal_coefficients(mode: &ModeShape, tip: &TipConfig) -> Result<ModalCoefficients> {
    let opts = QuadratureOptions::default();
    let phi = |s: f64, k: u8| mode.norm * mode.raw(s, k);
    let int_sq = integrate(|s| phi(s, 0).powi(2), 0.0, 1.0, &opts)?;
    let int_curv = integrate(|s| phi(s, 2).powi(2), 0.0, 1.0, &opts)?;
    let int_nl = integrate(|s| (phi(s, 1) * phi(s, 2)).powi(2), 0.0, 1.0, &opts)?;
    let int_phi = integrate(|s| phi(s, 0), 0.0, 1.0, &opts)?;
    let tip_disp = phi(1.0, 0);
    let tip_slope = phi(1.0, 1);
    Ok(ModalCoefficients {
        m: int_sq + tip.m_tip * tip_disp.powi(2) + tip.j_tip * tip_slope.powi(2),
        j_nl: tip.j_tip * tip_slope.powi(4),
        k_l: int_curv,
        c_l: int_curv,
        k_nl: int_nl,
        c_nl: int_nl,
        m_b: int_phi + tip.m_tip * tip_disp,
    })
}

/// Coefficients divided by `𝓜`, with the material data attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCoefficients {
    /// `√(𝓚_l/𝓜)`
    pub omega0: f64,
    pub c_l: f64,
    pub c_nl: f64,
    pub k_nl: f64,
    pub m_nl: f64,
    /// Forcing amplitude `F`.
    pub f: f64,
    pub e_r: f64,
    pub alpha: f64,
}

pub fn scale_coefficients(
    coeffs: &ModalCoefficients,
    mat: &MaterialParams,
    force: f64,
) -> Result<ScaledCoefficients> {
    if !(coeffs.m > 0.0) || !(coeffs.k_l > 0.0) {
        return Err(domain("modal mass and stiffness must be positive"));
    }
    let m = coeffs.m;
    Ok(ScaledCoefficients {
        omega0: (coeffs.k_l / m).sqrt(),
        c_l: coeffs.c_l / m,
        c_nl: coeffs.c_nl / m,
        k_nl: coeffs.k_nl / m,
        m_nl: coeffs.j_nl / m,
        f: force,
        e_r: mat.e_r(),
        alpha: mat.alpha(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tip11() -> TipConfig {
        TipConfig::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn bare_cantilever_eigenvalues() {
        let b = solve_eigen(&TipConfig::no_tip(), 3, DEFAULT_SEARCH_MAX).unwrap();
        assert_relative_eq!(b[0], 1.87510406871196, epsilon = 1e-11);
        assert_relative_eq!(b[1], 4.69409113297417, epsilon = 1e-11);
        assert_relative_eq!(b[2], 7.85475743823761, epsilon = 1e-10);
        assert_relative_eq!(b[0] * b[0], 3.51602, epsilon = 1e-5);
    }

    #[test]
    fn tabulated_tip_eigenvalue() {
        let b = solve_eigen(&tip11(), 1, DEFAULT_SEARCH_MAX).unwrap()[0];
        assert_relative_eq!(b, 1.17715312089611, epsilon = 1e-11);
        assert_relative_eq!(b * b, 1.38569, epsilon = 1e-5);
    }

    #[test]
    fn too_small_search_range_errors() {
        let err = solve_eigen(&TipConfig::no_tip(), 2, 3.0).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientRange {
                requested: 2,
                found: 1,
                search_max: 3.0
            }
        );
    }

    #[test]
    fn bare_mode_values() {
        let mode = ModeShape::fundamental(&TipConfig::no_tip()).unwrap();
        assert_relative_eq!(mode_shape_eval(&mode, 1.0, 0).unwrap(), 2.0, epsilon = 1e-9);
        assert!(mode_shape_eval(&mode, 0.0, 0).unwrap().abs() < 1e-14);
        assert!(mode_shape_eval(&mode, 0.0, 1).unwrap().abs() < 1e-12);
        // free end: no moment, no shear
        assert!(mode_shape_eval(&mode, 1.0, 2).unwrap().abs() < 1e-9);
        assert!(mode_shape_eval(&mode, 1.0, 3).unwrap().abs() < 1e-8);
        assert_eq!(
            mode_shape_eval(&mode, 0.5, 4),
            Err(Error::UnsupportedDerivative(4))
        );
    }

    #[test]
    fn bare_coefficients() {
        let tip = TipConfig::no_tip();
        let mode = ModeShape::fundamental(&tip).unwrap();
        let c = modal_coefficients(&mode, &tip).unwrap();
        assert_relative_eq!(c.m, 1.0, epsilon = 1e-10);
        assert_relative_eq!(c.k_l, 12.36236, epsilon = 1e-5);
        assert_relative_eq!(c.k_l, mode.beta.powi(4), max_relative = 1e-9);
        assert_relative_eq!(c.k_nl, 20.22031, epsilon = 1e-4);
        assert_relative_eq!(c.m_b, 0.782992, epsilon = 1e-6);
        assert_eq!(c.j_nl, 0.0);
    }

    #[test]
    fn tabulated_tip_coefficients() {
        let tip = tip11();
        let mode = ModeShape::fundamental(&tip).unwrap();
        assert_relative_eq!(mode.coeff_b_over_a, -0.215842 / 5.50054, epsilon = 1e-6);
        let phi1 = mode_shape_eval(&mode, 1.0, 0).unwrap();
        let dphi1 = mode_shape_eval(&mode, 1.0, 1).unwrap();
        assert_relative_eq!(phi1, -2.69692, epsilon = 1e-5);
        assert_relative_eq!(dphi1 * dphi1, 70.769, epsilon = 1e-3);
        let c = modal_coefficients(&mode, &tip).unwrap();
        assert_relative_eq!(c.m, 1.0 + 70.769 + 7.2734, epsilon = 2e-3);
        assert_relative_eq!(c.j_nl, 5008.25, max_relative = 1e-5);
        assert_relative_eq!(c.k_l, 98.10577, epsilon = 1e-4);
        assert_relative_eq!(c.k_nl, 2979.6586, max_relative = 1e-6);
        assert_relative_eq!(c.m_b - phi1, -0.648623, epsilon = 1e-6);
    }

    #[test]
    fn exact_model_satisfies_tip_conditions() {
        for (m, j) in [(1.0, 1.0), (0.5, 0.0), (0.0, 0.2), (2.0, 0.1)] {
            let tip = TipConfig::new(m, j)
                .unwrap()
                .with_boundary(BoundaryModel::Exact);
            let betas = solve_eigen(&tip, 2, DEFAULT_SEARCH_MAX).unwrap();
            for &beta in &betas {
                let mode = ModeShape::new(beta, &tip).unwrap();
                let w2 = beta.powi(4);
                let e = |k| mode_shape_eval(&mode, 1.0, k).unwrap();
                let scale = 1.0 + w2 * (e(0).abs() + e(1).abs());
                assert!((e(2) - j * w2 * e(1)).abs() < 1e-8 * scale);
                assert!((e(3) + m * w2 * e(0)).abs() < 1e-8 * scale);
                // Rayleigh identity: stiffness = ω² × generalised mass
                let c = modal_coefficients(&mode, &tip).unwrap();
                assert_relative_eq!(c.k_l, w2 * c.m, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn tip_config_rejects_negative_values() {
        assert!(TipConfig::new(-1.0, 0.0).is_err());
        assert!(TipConfig::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn scaled_coefficients_divide_by_mass() {
        let c = ModalCoefficients {
            m: 2.0,
            j_nl: 4.0,
            k_l: 8.0,
            c_l: 8.0,
            k_nl: 6.0,
            c_nl: 6.0,
            m_b: 1.0,
        };
        let mat = MaterialParams::from_ratio(0.5, 0.5).unwrap();
        let s = scale_coefficients(&c, &mat, 0.3).unwrap();
        assert_eq!(s.omega0, 2.0);
        assert_eq!(
            (s.c_l, s.k_nl, s.m_nl, s.f, s.e_r),
            (4.0, 3.0, 2.0, 0.3, 0.5)
        );
    }
}
