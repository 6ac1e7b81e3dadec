//! Dynamics of a fractional Kelvin-Voigt viscoelastic cantilever beam.
//!
//! The crate is organised bottom-up:
//!
//! - [`kelvin_voigt`]: the constitutive law `σ = E∞ ε + Eα D^α ε` in the
//!   frequency domain (storage/loss moduli, tangent loss) and in the time
//!   domain (closed-form ramp-hold response and an L1 stress integrator).
//! - [`modal`]: the cantilever eigenproblem with an optional tip mass and
//!   rotatory inertia, mode shapes, and the single-mode Galerkin coefficients.
//! - [`integrator`]: L1 + Newmark time stepping of the linear and nonlinear
//!   single-mode oscillators, plus envelope extraction.
//! - [`multiscale`]: multiple-scales slow-flow results: free-vibration
//!   envelope, decay rate and its sensitivity, and the primary-resonance
//!   steady-state cubic with frequency sweeps.
//!
//! Every operation is a pure function of its inputs.

// `!(x > 0.0)` is used throughout so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod integrator;
pub mod kelvin_voigt;
pub mod modal;
pub mod multiscale;
pub mod quadrature;
pub mod roots;

pub use error::{Error, Result};
pub use integrator::{
    caputo_l1, envelope_fit, integrate_linear, integrate_nonlinear, l1_weights, EnvelopeFit,
    EnvelopeSource, Forcing, GridSpec, Harmonic, LinearOscillator, Trajectory,
};
pub use kelvin_voigt::{
    complex_modulus, ramp_hold_stress, stress_history_l1, tangent_loss, ComplexModulus,
    MaterialParams, StrainProgram,
};
pub use modal::{
    characteristic_residual, modal_coefficients, mode_shape_eval, scale_coefficients, solve_eigen,
    BoundaryModel, ModalCoefficients, ModeShape, ScaledCoefficients, TipConfig,
};
pub use multiscale::{
    critical_alpha, decay_rate, free_envelope, frequency_sweep, parameter_sweep, sensitivity,
    solve_steady_amplitudes, steady_state_cubic, CaseTag, CriticalAlpha, CriticalMode, CubicCoeffs,
    MmsParams, ResponseBranch, SteadyStateRoot, SweepOverrides, SweepVar,
};
