//! Subcommand implementations. Each one resolves its parameters, calls the
//! library and fills a [`ResultTable`].

use clap::{Args, ValueEnum};
use fracbeam_core::integrator::{envelope_fit, EnvelopeSource};
use fracbeam_core::kelvin_voigt::{complex_modulus, ramp_hold_stress, stress_history_l1};
use fracbeam_core::modal::{mode_shape_eval, DEFAULT_SEARCH_MAX};
use fracbeam_core::multiscale::{decay_rate_at, sensitivity, sensitivity_slope};
use fracbeam_core::{
    critical_alpha as find_critical, free_envelope, integrate_linear, integrate_nonlinear,
    modal_coefficients, parameter_sweep, scale_coefficients, solve_eigen, BoundaryModel,
    CriticalMode, Forcing, GridSpec, Harmonic, LinearOscillator, MaterialParams, MmsParams,
    ModalCoefficients, ModeShape, StrainProgram, SweepVar, TipConfig,
};

use crate::config::Resolver;
use crate::error::CliError;
use crate::table::{Cell, ResultTable};
use crate::{Boundary, CaseArgs, CaseName};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn tip_config(args: &CaseArgs, cfg: &Resolver) -> Result<TipConfig, CliError> {
    let name = cfg.get_enum(args.case, "case", CaseName::NoTip)?;
    let boundary = match cfg.get_enum(args.boundary, "boundary", Boundary::Tabulated)? {
        Boundary::Tabulated => BoundaryModel::Tabulated,
        Boundary::Exact => BoundaryModel::Exact,
    };
    let tip = match name {
        CaseName::NoTip | CaseName::TipMass => {
            if args.m_tip.is_some() || args.j_tip.is_some() {
                return Err(usage("--M and --J only apply to --case custom"));
            }
            if name == CaseName::NoTip {
                TipConfig::no_tip()
            } else {
                TipConfig::new(1.0, 1.0)?
            }
        }
        CaseName::Custom => {
            let m = cfg.get(args.m_tip, "m", 0.0)?;
            let j = cfg.get(args.j_tip, "j", 0.0)?;
            TipConfig::new(m, j)?
        }
    };
    Ok(tip.with_boundary(boundary))
}

fn fundamental(tip: &TipConfig) -> Result<(ModeShape, ModalCoefficients), CliError> {
    let mode = ModeShape::fundamental(tip)?;
    let coeffs = modal_coefficients(&mode, tip)?;
    Ok((mode, coeffs))
}

fn mms_params(tip: &TipConfig, mat: &MaterialParams, f: f64) -> Result<MmsParams, CliError> {
    let (_, coeffs) = fundamental(tip)?;
    Ok(MmsParams::from_scaled(&scale_coefficients(
        &coeffs, mat, f,
    )?)?)
}

fn linspace(from: f64, to: f64, count: usize) -> Result<Vec<f64>, CliError> {
    if count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    if count == 1 {
        return Ok(vec![from]);
    }
    if from == to {
        return Err(usage("sweep range is empty (--from equals --to)"));
    }
    let step = (to - from) / (count - 1) as f64;
    Ok((0..count).map(|i| from + step * i as f64).collect())
}

fn positive(value: f64, flag: &str) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(usage(format!("{flag} must be positive, got {value}")))
    }
}

// ---------------------------------------------------------------- modes

#[derive(Args, Debug)]
pub struct ModesArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Number of modes [default: 1]
    #[arg(short = 'n', long = "modes")]
    pub modes: Option<usize>,
    /// Mode-shape samples on [0, 1] [default: 11]
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Upper end of the eigenvalue search in beta [default: 20]
    #[arg(long)]
    pub search_max: Option<f64>,
}

pub fn modes(args: &ModesArgs, cfg: &Resolver) -> Result<ResultTable, CliError> {
    let tip = tip_config(&args.case, cfg)?;
    let n = cfg.get(args.modes, "modes", 1)?;
    let res = cfg.get(args.resolution, "resolution", 11)?;
    let search_max = cfg.get(args.search_max, "search-max", DEFAULT_SEARCH_MAX)?;
    if n == 0 {
        return Err(usage("--modes must be at least 1"));
    }
    let s_grid = linspace(0.0, 1.0, res.max(2))?;
    let mut t = ResultTable::new(&["mode", "beta", "beta_sq", "s", "phi"]);
    for (i, beta) in solve_eigen(&tip, n, search_max)?.into_iter().enumerate() {
        let mode = ModeShape::new(beta, &tip)?;
        for &s in &s_grid {
            let phi = mode_shape_eval(&mode, s, 0)?;
            t.push(vec![
                (i + 1).into(),
                beta.into(),
                mode.omega().into(),
                s.into(),
                phi.into(),
            ]);
        }
    }
    t.note("command", "modes");
    Ok(t)
}

// ---------------------------------------------------------------- coeffs

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub case: CaseArgs,
}

pub fn coeffs(args: &CoeffsArgs, cfg: &Resolver) -> Result<ResultTable, CliError> {
    let tip = tip_config(&args.case, cfg)?;
    let (mode, c) = fundamental(&tip)?;
    // the bare-beam projection of the same mode isolates the integral terms
    let bare = modal_coefficients(&mode, &TipConfig::no_tip())?;
    let phi_tip = mode_shape_eval(&mode, 1.0, 0)?;
    let dphi_tip = mode_shape_eval(&mode, 1.0, 1)?;
    let scaled = scale_coefficients(&c, &MaterialParams::from_ratio(0.0, 1.0)?, 0.0)?;
    let mut t = ResultTable::new(&[
        "beta",
        "beta_sq",
        "m",
        "j_nl",
        "k_l",
        "c_l",
        "k_nl",
        "c_nl",
        "m_b",
        "int_phi",
        "phi_tip",
        "phi_tip_sq",
        "dphi_tip_sq",
        "omega0",
    ]);
    t.push(vec![
        mode.beta.into(),
        mode.omega().into(),
        c.m.into(),
        c.j_nl.into(),
        c.k_l.into(),
        c.c_l.into(),
        c.k_nl.into(),
        c.c_nl.into(),
        c.m_b.into(),
        bare.m_b.into(),
        phi_tip.into(),
        (phi_tip * phi_tip).into(),
        (dphi_tip * dphi_tip).into(),
        scaled.omega0.into(),
    ]);
    t.note("command", "coeffs");
    Ok(t)
}

// ---------------------------------------------------------------- constitutive

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstitutiveMode {
    /// Ramp-hold stress history.
    Time,
    /// Storage, loss and tangent loss over a log-spaced frequency grid.
    Frequency,
}

#[derive(Args, Debug)]
pub struct ConstitutiveArgs {
    /// [default: time]
    #[arg(long, value_enum)]
    pub mode: Option<ConstitutiveMode>,
    /// Spring modulus [default: 1]
    #[arg(long)]
    pub e_inf: Option<f64>,
    /// Modulus ratio E_alpha / E_inf [default: 1]
    #[arg(long)]
    pub er: Option<f64>,
    /// Fractional order [default: 0.5]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Ramp strain rate [default: 1/24]
    #[arg(long)]
    pub rate: Option<f64>,
    /// End of the ramp [default: 2.5]
    #[arg(long)]
    pub t_ramp: Option<f64>,
    /// Time step [default: 0.001]
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time [default: 10]
    #[arg(long = "t")]
    pub t_final: Option<f64>,
    /// Lowest frequency [default: 0.01]
    #[arg(long)]
    pub omega_min: Option<f64>,
    /// Highest frequency [default: 100]
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Frequency samples [default: 201]
    #[arg(long)]
    pub count: Option<usize>,
}

pub fn constitutive(args: &ConstitutiveArgs, cfg: &Resolver) -> Result<ResultTable, CliError> {
    let mode = cfg.get_enum(args.mode, "mode", ConstitutiveMode::Time)?;
    let e_inf = cfg.get(args.e_inf, "e-inf", 1.0)?;
    let er = cfg.get(args.er, "er", 1.0)?;
    let alpha = cfg.get(args.alpha, "alpha", 0.5)?;
    let mat = MaterialParams::new(e_inf, er * e_inf, alpha)?;
    let mut t;
    match mode {
        ConstitutiveMode::Time => {
            let rate = cfg.get(args.rate, "rate", 1.0 / 24.0)?;
            let t_ramp = cfg.get(args.t_ramp, "t-ramp", 2.5)?;
            let dt = positive(cfg.get(args.dt, "dt", 1e-3)?, "--dt")?;
            let t_final = positive(cfg.get(args.t_final, "t", 10.0)?, "--t")?;
            let grid = GridSpec::with_end(dt, t_final)?;
            let program = StrainProgram::ramp_hold(rate, t_ramp)?.sample(dt, grid.n_steps)?;
            let stress = stress_history_l1(&mat, &program)?;
            t = ResultTable::new(&["t", "strain", "stress_l1", "stress_exact"]);
            for (k, s) in stress.iter().enumerate() {
                let time = grid.time(k);
                t.push(vec![
                    time.into(),
                    program.strain(time).into(),
                    (*s).into(),
                    ramp_hold_stress(&mat, rate, t_ramp, time)?.into(),
                ]);
            }
        }
        ConstitutiveMode::Frequency => {
            let lo = positive(cfg.get(args.omega_min, "omega-min", 0.01)?, "--omega-min")?;
            let hi = positive(cfg.get(args.omega_max, "omega-max", 100.0)?, "--omega-max")?;
            let count = cfg.get(args.count, "count", 201)?;
            t = ResultTable::new(&["omega", "storage", "loss", "tan_delta"]);
            for lw in linspace(lo.ln(), hi.ln(), count)? {
                let w = lw.exp();
                let g = complex_modulus(&mat, w)?;
                t.push(vec![
                    w.into(),
                    g.storage.into(),
                    g.loss.into(),
                    g.tan_delta().into(),
                ]);
            }
        }
    }
    t.note("command", "constitutive");
    Ok(t)
}

// ---------------------------------------------------------------- simulate

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Integrate q'' + E_r c D^a q + k q = F(t) instead of the nonlinear modal equation.
    #[arg(long)]
    pub linear: bool,
    #[command(flatten)]
    pub case: CaseArgs,
    /// Modulus ratio [default: 1]
    #[arg(long)]
    pub er: Option<f64>,
    /// Fractional order [default: 0.5]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Linear stiffness, `--linear` only [default: 1.24]
    #[arg(long)]
    pub k: Option<f64>,
    /// Linear damping coefficient, `--linear` only [default: 1.24]
    #[arg(long)]
    pub c: Option<f64>,
    /// Initial displacement [default: 1]
    #[arg(long)]
    pub q0: Option<f64>,
    /// Initial velocity [default: 0]
    #[arg(long)]
    pub v0: Option<f64>,
    /// Time step [default: 0.001]
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time [default: 200]
    #[arg(long = "t")]
    pub t_final: Option<f64>,
    /// Amplitude of F(t) (linear) or of the base acceleration (nonlinear) [default: 0]
    #[arg(long)]
    pub force_amp: Option<f64>,
    /// Angular frequency of the excitation [default: 1]
    #[arg(long)]
    pub force_freq: Option<f64>,
    /// Emit every n-th sample [default: 1]
    #[arg(long)]
    pub stride: Option<usize>,
}

pub fn simulate(args: &SimulateArgs, cfg: &Resolver) -> Result<ResultTable, CliError> {
    let linear = cfg.switch(args.linear, "linear")?;
    if linear
        && (args.case.case.is_some() || args.case.m_tip.is_some() || args.case.j_tip.is_some())
    {
        return Err(usage("--case, --M and --J do not apply to --linear"));
    }
    if !linear && (args.k.is_some() || args.c.is_some()) {
        return Err(usage("--k and --c require --linear"));
    }
    let er = cfg.get(args.er, "er", 1.0)?;
    let alpha = cfg.get(args.alpha, "alpha", 0.5)?;
    let q0 = cfg.get(args.q0, "q0", 1.0)?;
    let v0 = cfg.get(args.v0, "v0", 0.0)?;
    let dt = positive(cfg.get(args.dt, "dt", 1e-3)?, "--dt")?;
    let t_final = positive(cfg.get(args.t_final, "t", 200.0)?, "--t")?;
    let amp = cfg.get(args.force_amp, "force-amp", 0.0)?;
    let freq = cfg.get(args.force_freq, "force-freq", 1.0)?;
    let stride = cfg.get(args.stride, "stride", 1)?;
    if stride == 0 {
        return Err(usage("--stride must be at least 1"));
    }
    let grid = GridSpec::with_end(dt, t_final)?;
    let harmonic = (amp != 0.0).then(|| Harmonic::new(amp, freq, 0.0));

    let mut t;
    let traj = if linear {
        let k = cfg.get(args.k, "k", 1.24)?;
        let c = cfg.get(args.c, "c", 1.24)?;
        let osc = LinearOscillator::new(c, k, er, alpha)?;
        let forcing = harmonic.map_or(Forcing::None, Forcing::Harmonic);
        let traj = integrate_linear(&osc, q0, v0, grid, &forcing)?;
        t = ResultTable::new(&["t", "q", "v", "a", "energy"]);
        for i in (0..=grid.n_steps).step_by(stride) {
            let (q, v) = (traj.q[i], traj.v[i]);
            t.push(vec![
                grid.time(i).into(),
                q.into(),
                v.into(),
                traj.a[i].into(),
                osc.energy(q, v).into(),
            ]);
        }
        traj
    } else {
        let tip = tip_config(&args.case, cfg)?;
        let (_, coeffs) = fundamental(&tip)?;
        let mat = MaterialParams::from_ratio(er, alpha)?;
        let traj = integrate_nonlinear(&coeffs, &mat, q0, v0, grid, harmonic)?;
        t = ResultTable::new(&["t", "q", "v", "a"]);
        for i in (0..=grid.n_steps).step_by(stride) {
            t.push(vec![
                grid.time(i).into(),
                traj.q[i].into(),
                traj.v[i].into(),
                traj.a[i].into(),
            ]);
        }
        traj
    };
    t.note("command", "simulate");
    for (k, v) in &traj.metadata {
        t.note(&format!("model.{k}"), v);
    }
    Ok(t)
}

// ---------------------------------------------------------------- envelope

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnvelopeSourceArg {
    /// Closed-form multiple-scales envelope of the nonlinear modal equation.
    Mms,
    /// Power-law and exponential fits to simulated linear responses.
    Linear,
}

#[derive(Args, Debug)]
pub struct EnvelopeArgs {
    /// [default: mms]
    #[arg(long, value_enum)]
    pub source: Option<EnvelopeSourceArg>,
    #[command(flatten)]
    pub case: CaseArgs,
    /// Modulus ratio [default: 0.1 for mms, 1 for linear]
    #[arg(long)]
    pub er: Option<f64>,
    /// Fractional order for mms [default: 0.5]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Initial amplitude for mms [default: 0.2]
    #[arg(long)]
    pub a0: Option<f64>,
    /// Initial phase for mms [default: 0]
    #[arg(long)]
    pub phi0: Option<f64>,
    /// Final time [default: 20 for mms, 200 for linear]
    #[arg(long = "t")]
    pub t_final: Option<f64>,
    /// Sample spacing (mms) or time step (linear) [default: 0.1 for mms, 0.01 for linear]
    #[arg(long)]
    pub dt: Option<f64>,
    /// Orders to simulate for linear [default: 0.3,0.5,0.7,1]
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Linear stiffness [default: 1.24]
    #[arg(long)]
    pub k: Option<f64>,
    /// Linear damping coefficient [default: 1.24]
    #[arg(long)]
    pub c: Option<f64>,
    /// Initial displacement for linear [default: 1]
    #[arg(long)]
    pub q0: Option<f64>,
    /// Trailing fraction of the run used for fitting [default: 0.5]
    #[arg(long)]
    pub window: Option<f64>,
}

pub fn envelope(args: &EnvelopeArgs, cfg: &Resolver) -> Result<ResultTable, CliError> {
    let source = cfg.get_enum(args.source, "source", EnvelopeSourceArg::Mms)?;
    let mut t;
    match source {
        EnvelopeSourceArg::Mms => {
            if args.alphas.is_some() || args.k.is_some() || args.c.is_some() || args.q0.is_some() {
                return Err(usage(
                    "--alphas, --k, --c and --q0 apply to --source linear",
                ));
            }
            let tip = tip_config(&args.case, cfg)?;
            let er = cfg.get(args.er, "er", 0.1)?;
            let alpha = cfg.get(args.alpha, "alpha", 0.5)?;
            let a0 = cfg.get(args.a0, "a0", 0.2)?;
            let phi0 = cfg.get(args.phi0, "phi0", 0.0)?;
            let t_final = positive(cfg.get(args.t_final, "t", 20.0)?, "--t")?;
            let dt = positive(cfg.get(args.dt, "dt", 0.1)?, "--dt")?;
            let params = mms_params(&tip, &MaterialParams::from_ratio(er, alpha)?, 0.0)?;
            let grid = GridSpec::with_end(dt, t_final)?;
            t = ResultTable::new(&["t", "a", "phi"]);
            for time in grid.times() {
                let (a, phi) = free_envelope(&params, a0, phi0, time)?;
                t.push(vec![time.into(), a.into(), phi.into()]);
            }
        }
        EnvelopeSourceArg::Linear => {
            if args.case.case.is_some()
                || args.a0.is_some()
                || args.phi0.is_some()
                || args.alpha.is_some()
            {
                return Err(usage(
                    "--case, --alpha, --a0 and --phi0 apply to --source mms",
                ));
            }
            let alphas = cfg.get_list(args.alphas.clone(), "alphas", &[0.3, 0.5, 0.7, 1.0])?;
            let er = cfg.get(args.er, "er", 1.0)?;
            let k = cfg.get(args.k, "k", 1.24)?;
            let c = cfg.get(args.c, "c", 1.24)?;
            let q0 = cfg.get(args.q0, "q0", 1.0)?;
            let t_final = positive(cfg.get(args.t_final, "t", 200.0)?, "--t")?;
            let dt = positive(cfg.get(args.dt, "dt", 0.01)?, "--dt")?;
            let window = cfg.get(args.window, "window", 0.5)?;
            let grid = GridSpec::with_end(dt, t_final)?;
            t = ResultTable::new(&[
                "alpha",
                "loglog_slope",
                "loglog_r2",
                "exp_rate",
                "exp_r2",
                "non_oscillatory",
                "n_points",
            ]);
            for alpha in alphas {
                let osc = LinearOscillator::new(c, k, er, alpha)?;
                let traj = integrate_linear(&osc, q0, 0.0, grid, &Forcing::None)?;
                let fit = envelope_fit(&traj, window)?;
                t.push(vec![
                    alpha.into(),
                    fit.loglog_slope.into(),
                    fit.loglog_r2.into(),
                    fit.exp_rate.into(),
                    fit.exp_r2.into(),
                    (fit.source == EnvelopeSource::NonOscillatory).into(),
                    fit.peak_times.len().into(),
                ]);
            }
        }
    }
    t.note("command", "envelope");
    Ok(t)
}

// ---------------------------------------------------------------- critical-alpha

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CriticalModeArg {
    DecayPeak,
    SensitivityExtremum,
    Both,
}

#[derive(Args, Debug)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Modulus ratio [default: 1]
    #[arg(long)]
    pub er: Option<f64>,
    /// Natural frequency; overrides the value of the selected case.
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Root condition [default: both]
    #[arg(long, value_enum)]
    pub mode: Option<CriticalModeArg>,
    /// Emit decay rate and its derivatives over alpha instead of the roots.
    #[arg(long)]
    pub curve: bool,
    /// Interior alpha samples for `--curve` [default: 99]
    #[arg(long)]
    pub count: Option<usize>,
}

pub fn critical_alpha(args: &CriticalArgs, cfg: &Resolver) -> Result<ResultTable, CliError> {
    let tip = tip_config(&args.case, cfg)?;
    let er = cfg.get(args.er, "er", 1.0)?;
    let mut params = mms_params(&tip, &MaterialParams::from_ratio(er, 0.5)?, 0.0)?;
    if let Some(w) = cfg.get_opt(args.omega0, "omega0")? {
        params.omega0 = positive(w, "--omega0")?;
    }
    let mode = cfg.get_enum(args.mode, "mode", CriticalModeArg::Both)?;
    let mut t;
    if cfg.switch(args.curve, "curve")? {
        let count = cfg.get(args.count, "count", 99)?;
        t = ResultTable::new(&["alpha", "decay_rate", "sensitivity", "sensitivity_slope"]);
        for i in 1..=count {
            let alpha = i as f64 / (count + 1) as f64;
            let p = params.with_alpha(alpha);
            t.push(vec![
                alpha.into(),
                decay_rate_at(&p, alpha).into(),
                sensitivity(&p).into(),
                sensitivity_slope(&p).into(),
            ]);
        }
    } else {
        let modes: &[(i64, CriticalMode)] = match mode {
            CriticalModeArg::DecayPeak => &[(0, CriticalMode::DecayPeak)],
            CriticalModeArg::SensitivityExtremum => &[(1, CriticalMode::SensitivityExtremum)],
            CriticalModeArg::Both => &[
                (0, CriticalMode::DecayPeak),
                (1, CriticalMode::SensitivityExtremum),
            ],
        };
        t = ResultTable::new(&[
            "mode",
            "omega0",
            "root",
            "residual",
            "in_unit_interval",
            "closed_form",
        ]);
        for &(code, m) in modes {
            let cr = find_critical(&params, m)?;
            t.push(vec![
                code.into(),
                params.omega0.into(),
                cr.root.unwrap_or(f64::NAN).into(),
                cr.residual.unwrap_or(f64::NAN).into(),
                cr.in_unit_interval.into(),
                cr.closed_form.unwrap_or(f64::NAN).into(),
            ]);
        }
        t.note("mode_codes", "0=decay-peak 1=sensitivity-extremum");
    }
    t.note("command", "critical-alpha");
    Ok(t)
}

// ---------------------------------------------------------------- sweep

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepVarArg {
    Delta,
    Alpha,
    Er,
    F,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Swept quantity [default: delta]
    #[arg(long, value_enum)]
    pub var: Option<SweepVarArg>,
    /// First grid value [default: -1]
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    /// Last grid value [default: 4]
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Grid points [default: 501]
    #[arg(long)]
    pub count: Option<usize>,
    /// Detuning held fixed when another quantity is swept [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Fractional order [default: 0.4]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Modulus ratio [default: 0.3]
    #[arg(long)]
    pub er: Option<f64>,
    /// Forcing amplitude [default: 1]
    #[arg(long)]
    pub f: Option<f64>,
}

pub fn sweep(args: &SweepArgs, cfg: &Resolver) -> Result<ResultTable, CliError> {
    let tip = tip_config(&args.case, cfg)?;
    let var = cfg.get_enum(args.var, "var", SweepVarArg::Delta)?;
    let from = cfg.get(args.from, "from", -1.0)?;
    let to = cfg.get(args.to, "to", 4.0)?;
    let count = cfg.get(args.count, "count", 501)?;
    let alpha = cfg.get(args.alpha, "alpha", 0.4)?;
    let er = cfg.get(args.er, "er", 0.3)?;
    let f = cfg.get(args.f, "f", 1.0)?;
    let delta = match var {
        SweepVarArg::Delta => {
            if args.delta.is_some() {
                return Err(usage("--delta is the swept variable; use --from/--to"));
            }
            0.0
        }
        _ => cfg.get(args.delta, "delta", 0.0)?,
    };
    let (sv, name) = match var {
        SweepVarArg::Delta => (SweepVar::Delta, "delta"),
        SweepVarArg::Alpha => (SweepVar::Alpha, "alpha"),
        SweepVarArg::Er => (SweepVar::ERatio, "er"),
        SweepVarArg::F => (SweepVar::Force, "f"),
    };
    let params = mms_params(&tip, &MaterialParams::from_ratio(er, alpha)?, f)?;
    let grid = linspace(from, to, count)?;
    let br = parameter_sweep(&params, sv, &grid, delta)?;

    let mut t = ResultTable::new(&[
        name, "kind", "n_roots", "root", "amp", "gamma", "stable", "branch",
    ]);
    let n = br.values.len();
    for i in 0..n {
        let roots = &br.roots[i];
        for (j, r) in roots.iter().enumerate() {
            t.push(vec![
                br.values[i].into(),
                0i64.into(),
                roots.len().into(),
                j.into(),
                r.amp.into(),
                r.gamma.into(),
                r.stable.into(),
                br.branch_ids[i][j].into(),
            ]);
        }
        if i + 1 < n {
            let (lo, hi) = (
                br.values[i].min(br.values[i + 1]),
                br.values[i].max(br.values[i + 1]),
            );
            for bf in br
                .bifurcations
                .iter()
                .filter(|b| b.value >= lo && b.value <= hi)
            {
                t.push(vec![
                    bf.value.into(),
                    1i64.into(),
                    2usize.into(),
                    Cell::Int(-1),
                    bf.amp.into(),
                    f64::NAN.into(),
                    false.into(),
                    Cell::Int(-1),
                ]);
            }
        }
    }
    t.note("command", "sweep");
    t.note("kind_codes", "0=root 1=bifurcation");
    let intervals: Vec<String> = br
        .three_root_intervals()
        .iter()
        .map(|(a, b)| format!("[{a:.16e},{b:.16e}]"))
        .collect();
    t.note("three_root_intervals", intervals.join(";"));
    t.note("peak_amp", format!("{:.16e}", br.peak_amplitude()));
    Ok(t)
}
