//! Steady-state roots against a companion-matrix eigenvalue oracle.

use fracbeam_core::{solve_steady_amplitudes, CubicCoeffs};
use nalgebra::Matrix3;
use proptest::prelude::*;

fn companion_positive_roots([a, b, c, d]: [f64; 4]) -> Vec<f64> {
    let m = Matrix3::new(-b / a, -c / a, -d / a, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    let mut out: Vec<f64> = m
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()))
        .map(|z| {
            let mut x = z.re;
            for _ in 0..3 {
                let f = ((a * x + b) * x + c) * x + d;
                let df = (3.0 * a * x + 2.0 * b) * x + c;
                if df != 0.0 {
                    x -= f / df;
                }
            }
            x
        })
        .filter(|&x| x > 0.0)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

fn coeffs() -> impl Strategy<Value = CubicCoeffs> {
    (0.0..2.0, 0.0..2.0, -5.0..5.0, -5.0..5.0, 0.01..5.0).prop_map(|(a1, a2, b1, b2, c_rhs)| {
        CubicCoeffs {
            a1,
            a2,
            b1,
            b2,
            c_rhs,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn roots_agree_with_companion_matrix(c in coeffs()) {
        let roots = solve_steady_amplitudes(&c).unwrap();
        let oracle = companion_positive_roots(c.cubic());
        prop_assert_eq!(roots.len(), oracle.len());
        for (r, x) in roots.iter().zip(&oracle) {
            prop_assert!(((r.amp * r.amp - x) / x).abs() < 1e-8);
        }
    }

    #[test]
    fn count_follows_discriminant_sign(c in coeffs()) {
        let n = solve_steady_amplitudes(&c).unwrap().len();
        prop_assert_eq!(n, if c.discriminant() > 0.0 { 3 } else { 1 });
    }

    #[test]
    fn phase_is_consistent_with_both_balance_equations(c in coeffs()) {
        for r in solve_steady_amplitudes(&c).unwrap() {
            let a3 = r.amp.powi(3);
            let s = (c.a1 * r.amp + c.a2 * a3) / c.c_rhs.sqrt();
            let co = (c.b1 * r.amp + c.b2 * a3) / c.c_rhs.sqrt();
            prop_assert!((s * s + co * co - 1.0).abs() < 1e-12);
            prop_assert!((r.gamma.sin() - s).abs() < 1e-9);
            prop_assert!(r.gamma > -std::f64::consts::PI && r.gamma <= std::f64::consts::PI);
        }
    }
}

#[test]
fn nearly_linear_cubic_uses_degenerate_path() {
    let c = CubicCoeffs {
        a1: 0.3,
        a2: 1e-9,
        b1: 0.4,
        b2: 0.0,
        c_rhs: 0.25,
    };
    let roots = solve_steady_amplitudes(&c).unwrap();
    assert_eq!(roots.len(), 1);
    // the cubic term shifts the linear answer by O(a2)
    assert!((roots[0].amp - 1.0).abs() < 1e-8, "{}", roots[0].amp);
}
