//! Envelope extraction from sampled responses and decay-law fits.

use super::Trajectory;
use crate::error::{Error, Result};

/// Where the fitted amplitudes came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeSource {
    /// Local maxima of `|q|`, refined by a parabola through three samples.
    Peaks,
    /// The window holds a single-signed monotone tail with too few peaks,
    /// so `|q|` itself is fitted.
    NonOscillatory,
}

/// Least-squares fits of the envelope to `A t^s` (log-log) and `A e^{−λt}`
/// (semi-log).
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeFit {
    pub peak_times: Vec<f64>,
    pub peak_amps: Vec<f64>,
    pub loglog_slope: f64,
    pub loglog_intercept: f64,
    pub loglog_r2: f64,
    /// `λ` in `A e^{−λt}`.
    pub exp_rate: f64,
    pub exp_intercept: f64,
    pub exp_r2: f64,
    pub source: EnvelopeSource,
}

const MIN_PEAKS: usize = 5;

/// Fits the envelope over the trailing `window` fraction of the trajectory.
pub fn envelope_fit(traj: &Trajectory, window: f64) -> Result<EnvelopeFit> {
    envelope_fit_series(&traj.times(), &traj.q, window)
}

/// Like [`envelope_fit`] on raw samples.
pub fn envelope_fit_series(times: &[f64], values: &[f64], window: f64) -> Result<EnvelopeFit> {
    if times.len() != values.len() {
        return Err(Error::Input(format!(
            "{} times but {} values",
            times.len(),
            values.len()
        )));
    }
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::Domain(format!(
            "window fraction must lie in (0, 1], got {window}"
        )));
    }
    let n = values.len();
    let start = n - ((n as f64 * window).round() as usize).clamp(1, n);
    let t = &times[start..];
    let y = &values[start..];

    let (mut pt, mut pa) = peaks(t, y);
    let mut source = EnvelopeSource::Peaks;
    if pt.len() < MIN_PEAKS {
        let single_signed = y.iter().all(|&v| v > 0.0) || y.iter().all(|&v| v < 0.0);
        if !single_signed {
            return Err(Error::InsufficientData(format!(
                "found {} envelope peaks, need {MIN_PEAKS}",
                pt.len()
            )));
        }
        pt = t.to_vec();
        pa = y.iter().map(|v| v.abs()).collect();
        source = EnvelopeSource::NonOscillatory;
    }

    let (lt, la): (Vec<f64>, Vec<f64>) = pt
        .iter()
        .zip(&pa)
        .filter(|(&ti, &ai)| ti > 0.0 && ai > 0.0)
        .map(|(&ti, &ai)| (ti.ln(), ai.ln()))
        .unzip();
    if lt.len() < 2 {
        return Err(Error::InsufficientData(
            "fewer than two positive samples".into(),
        ));
    }
    let (slope, icpt, r2) = linear_fit(&lt, &la);
    let et: Vec<f64> = pt
        .iter()
        .zip(&pa)
        .filter(|(_, &ai)| ai > 0.0)
        .map(|(&ti, _)| ti)
        .collect();
    let (rate, eicpt, er2) = linear_fit(&et, &la_all(&pa));

    Ok(EnvelopeFit {
        peak_times: pt,
        peak_amps: pa,
        loglog_slope: slope,
        loglog_intercept: icpt,
        loglog_r2: r2,
        exp_rate: -rate,
        exp_intercept: eicpt,
        exp_r2: er2,
        source,
    })
}

fn la_all(a: &[f64]) -> Vec<f64> {
    a.iter().filter(|&&x| x > 0.0).map(|x| x.ln()).collect()
}

fn peaks(t: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut pt = Vec::new();
    let mut pa = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        let (l, c, r) = (y[i - 1].abs(), y[i].abs(), y[i + 1].abs());
        if c > l && c >= r {
            // vertex of the parabola through the three samples
            let h = t[i + 1] - t[i];
            let den = l - 2.0 * c + r;
            let (off, amp) = if den < 0.0 {
                let off = 0.5 * (l - r) / den;
                (off, c - 0.25 * (l - r) * off)
            } else {
                (0.0, c)
            };
            pt.push(t[i] + off * h);
            pa.push(amp);
        }
    }
    (pt, pa)
}

/// Ordinary least squares `y = m x + c`; returns `(m, c, r²)`.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let m = sxy / sxx;
    let c = my - m * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - m * a - c).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    (m, c, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(f: impl Fn(f64) -> f64, t0: f64, t1: f64, dt: f64) -> (Vec<f64>, Vec<f64>) {
        let n = ((t1 - t0) / dt).round() as usize;
        let t: Vec<f64> = (0..=n).map(|k| t0 + k as f64 * dt).collect();
        let y = t.iter().map(|&x| f(x)).collect();
        (t, y)
    }

    #[test]
    fn exponential_decay_rate_recovered() {
        let (t, y) = sample(|t| (-0.1 * t).exp() * t.cos(), 0.0, 60.0, 1e-3);
        let fit = envelope_fit_series(&t, &y, 1.0).unwrap();
        assert_eq!(fit.source, EnvelopeSource::Peaks);
        assert!((fit.exp_rate - 0.1).abs() < 1e-4);
        assert!(fit.exp_r2 > 0.9999);
    }

    #[test]
    fn power_law_slope_recovered() {
        let (t, y) = sample(|t| t.powf(-1.5) * t.cos(), 1.0, 200.0, 1e-3);
        let fit = envelope_fit_series(&t, &y, 1.0).unwrap();
        assert!(
            (fit.loglog_slope + 1.5).abs() < 0.03,
            "{}",
            fit.loglog_slope
        );
        assert!(fit.loglog_r2 > 0.999);
    }

    #[test]
    fn monotone_tail_uses_samples() {
        let (t, y) = sample(|t| 2.0 * t.powf(-0.5), 1.0, 50.0, 0.01);
        let fit = envelope_fit_series(&t, &y, 0.5).unwrap();
        assert_eq!(fit.source, EnvelopeSource::NonOscillatory);
        assert!((fit.loglog_slope + 0.5).abs() < 1e-10);
    }

    #[test]
    fn sign_changing_signal_without_peaks_is_rejected() {
        let (t, y) = sample(|t| t - 1.0, 0.0, 2.0, 0.01);
        assert!(matches!(
            envelope_fit_series(&t, &y, 1.0),
            Err(Error::InsufficientData(_))
        ));
    }
}
