//! Primary-resonance steady states.
//!
//! With `Ω = ω₀ + Δ`, steady solutions of the slow flow satisfy
//!
//! ```text
//! (A₁a + A₂a³)² + (B₁a + B₂a³)² = C,   C = f²/(4ω₀²)
//! ```
//!
//! which is a cubic in `x = a²`.

use std::f64::consts::PI;

use super::MmsParams;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub c_rhs: f64,
}

impl CubicCoeffs {
    /// Coefficients `[a, b, c, d]` of `a x³ + b x² + c x + d`.
    pub fn cubic(&self) -> [f64; 4] {
        let (a1, a2, b1, b2) = (self.a1, self.a2, self.b1, self.b2);
        [
            a2 * a2 + b2 * b2,
            2.0 * (a1 * a2 + b1 * b2),
            a1 * a1 + b1 * b1,
            -self.c_rhs,
        ]
    }

    /// `ϑ = 18abcd − 4b³d + b²c² − 4ac³ − 27a²d²`.
    pub fn discriminant(&self) -> f64 {
        discriminant(self.cubic())
    }

    /// `(A₁a + A₂a³)² + (B₁a + B₂a³)² − C`, the unexpanded residual.
    pub fn radical_residual(&self, amp: f64) -> f64 {
        let (s, c) = self.brackets(amp);
        s * s + c * c - self.c_rhs
    }

    fn brackets(&self, amp: f64) -> (f64, f64) {
        let a3 = amp * amp * amp;
        (self.a1 * amp + self.a2 * a3, self.b1 * amp + self.b2 * a3)
    }
}

pub(crate) fn discriminant([a, b, c, d]: [f64; 4]) -> f64 {
    18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c
        - 4.0 * a * c.powi(3)
        - 27.0 * a * a * d * d
}

/// Builds the steady-state coefficients at detuning `delta`.
pub fn steady_state_cubic(params: &MmsParams, delta: f64) -> Result<CubicCoeffs> {
    params.validate()?;
    if !delta.is_finite() {
        return Err(domain("detuning must be finite"));
    }
    let (gs, gc) = params.damping_parts();
    let w = params.omega0;
    Ok(CubicCoeffs {
        a1: 0.5 * params.c_l * gs,
        a2: 0.375 * params.c_nl * gs,
        b1: delta - 0.5 * params.c_l * gc,
        b2: -0.75 * (params.c_nl * gc + params.k_nl / w + params.m_nl * w / 3.0),
        c_rhs: params.f * params.f / (4.0 * w * w),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateRoot {
    pub amp: f64,
    /// Phase `γ ∈ (−π, π]`.
    pub gamma: f64,
    pub stable: bool,
}

const DEGENERATE_LEADING: f64 = 1e-14;

/// Real non-negative steady amplitudes in increasing order.
///
/// When three roots coexist the middle one is tagged unstable.
pub fn solve_steady_amplitudes(coeffs: &CubicCoeffs) -> Result<Vec<SteadyStateRoot>> {
    if !(coeffs.c_rhs >= 0.0) {
        return Err(domain(format!(
            "forcing term must be non-negative, got {}",
            coeffs.c_rhs
        )));
    }
    let poly = coeffs.cubic();
    let xs = positive_roots(poly, coeffs.c_rhs == 0.0)?;
    let n = xs.len();
    Ok(xs
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            let amp = x.max(0.0).sqrt();
            let (s, c) = coeffs.brackets(amp);
            let gamma = if coeffs.c_rhs > 0.0 { s.atan2(c) } else { 0.0 };
            SteadyStateRoot {
                amp,
                gamma: if gamma == -PI { PI } else { gamma },
                stable: !(n == 3 && i == 1),
            }
        })
        .collect())
}

fn positive_roots(poly: [f64; 4], unforced: bool) -> Result<Vec<f64>> {
    let [a, b, c, d] = poly;
    let mag = b.abs().max(c.abs()).max(d.abs());
    if unforced {
        // x = 0 plus the roots of a x² + b x + c
        let mut out = vec![0.0];
        out.extend(real_quadratic(a, b, c).into_iter().filter(|&x| x > 0.0));
        out.sort_by(f64::total_cmp);
        return Ok(out);
    }
    let mut xs = if a.abs() <= DEGENERATE_LEADING * mag {
        if b.abs() > DEGENERATE_LEADING * mag {
            real_quadratic(b, c, d)
        } else if c != 0.0 {
            vec![-d / c]
        } else {
            return Err(domain("steady-state polynomial is identically constant"));
        }
    } else {
        real_cubic(poly)
    };
    for x in xs.iter_mut() {
        *x = newton_polish(poly, *x);
    }
    xs.retain(|&x| x > 0.0);
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}

fn real_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    // avoid cancellation in the smaller root
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0, 0.0];
    }
    vec![q / a, c / q]
}

/// Real roots of a cubic with non-zero leading coefficient. The branch is
/// chosen by the sign of the discriminant.
fn real_cubic(poly: [f64; 4]) -> Vec<f64> {
    let [a, b, c, d] = poly;
    let (bn, cn, dn) = (b / a, c / a, d / a);
    let shift = bn / 3.0;
    let p = cn - bn * bn / 3.0;
    let q = 2.0 * bn.powi(3) / 27.0 - bn * cn / 3.0 + dn;
    if discriminant(poly) > 0.0 && p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .collect()
    } else {
        let h = (q * q / 4.0 + p.powi(3) / 27.0).max(0.0).sqrt();
        let u = (-0.5 * q - q.signum() * h).cbrt();
        let y = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        vec![y - shift]
    }
}

fn newton_polish([a, b, c, d]: [f64; 4], x: f64) -> f64 {
    let f = |x: f64| ((a * x + b) * x + c) * x + d;
    let df = (3.0 * a * x + 2.0 * b) * x + c;
    if df == 0.0 {
        return x;
    }
    let xn = x - f(x) / df;
    if xn.is_finite() && f(xn).abs() <= f(x).abs() {
        xn
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::case1;
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unforced_response_is_trivial() {
        let c = steady_state_cubic(
            &MmsParams {
                f: 0.0,
                ..case1(0.3, 0.5)
            },
            0.5,
        )
        .unwrap();
        assert_eq!(c.c_rhs, 0.0);
        let roots = solve_steady_amplitudes(&c).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].amp, 0.0);
    }

    #[test]
    fn classical_order_removes_cosine_terms() {
        let p = case1(0.3, 1.0);
        let c = steady_state_cubic(&p, 0.7).unwrap();
        assert_eq!(c.b1, 0.7);
        assert_relative_eq!(c.b2, -0.75 * p.k_nl / p.omega0, max_relative = 1e-15);
        assert_relative_eq!(c.a1, 0.5 * p.c_l * 0.3, max_relative = 1e-15);
    }

    #[test]
    fn linear_system_gives_resonance_amplitude() {
        let c = CubicCoeffs {
            a1: 0.2,
            a2: 0.0,
            b1: -0.5,
            b2: 0.0,
            c_rhs: 0.09,
        };
        let roots = solve_steady_amplitudes(&c).unwrap();
        assert_eq!(roots.len(), 1);
        assert_relative_eq!(
            roots[0].amp,
            0.3 / (0.04f64 + 0.25).sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn zero_rotatory_term_matches_tip_free_coefficients() {
        let p1 = case1(0.3, 0.5);
        let p2 = MmsParams {
            case: crate::multiscale::CaseTag::TipMass,
            ..p1
        };
        assert_eq!(
            steady_state_cubic(&p1, 0.2).unwrap(),
            steady_state_cubic(&p2, 0.2).unwrap()
        );
    }

    #[test]
    fn three_roots_inside_hysteresis_region() {
        // α = 0.2 has a three-root window near Δ ≈ 1.8 for these coefficients
        let c = steady_state_cubic(&case1(0.3, 0.2), 1.8).unwrap();
        assert!(c.discriminant() > 0.0);
        let roots = solve_steady_amplitudes(&c).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[0].stable && !roots[1].stable && roots[2].stable);
        for r in &roots {
            assert!(c.radical_residual(r.amp).abs() < 1e-9 * c.c_rhs);
            let (s, co) = c.brackets(r.amp);
            let norm = (s * s + co * co) / c.c_rhs;
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}
