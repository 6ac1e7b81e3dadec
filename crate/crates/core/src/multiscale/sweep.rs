//! Steady-state response curves over a parameter grid.

use rayon::prelude::*;

use super::cubic::{solve_steady_amplitudes, steady_state_cubic, SteadyStateRoot};
use super::MmsParams;
use crate::error::{domain, input, Result};
use crate::roots::bisect;

const BIFURCATION_TOL: f64 = 1e-10;

/// The swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Delta,
    Alpha,
    ERatio,
    Force,
}

/// Parameter replacements applied before a detuning sweep.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOverrides {
    pub alpha: Option<f64>,
    pub e_r: Option<f64>,
    pub f: Option<f64>,
}

impl SweepOverrides {
    pub fn apply(&self, params: &MmsParams) -> MmsParams {
        let mut p = *params;
        if let Some(a) = self.alpha {
            p.alpha = a;
        }
        if let Some(e) = self.e_r {
            p.e_r = e;
        }
        if let Some(f) = self.f {
            p.f = f;
        }
        p
    }
}

/// A discriminant zero between two grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bifurcation {
    pub value: f64,
    /// Amplitude of the double root.
    pub amp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseBranch {
    pub variable: SweepVar,
    pub values: Vec<f64>,
    /// Roots at each grid value, in increasing amplitude.
    pub roots: Vec<Vec<SteadyStateRoot>>,
    /// Branch label of each root, from nearest-amplitude continuation.
    pub branch_ids: Vec<Vec<usize>>,
    pub bifurcations: Vec<Bifurcation>,
}

impl ResponseBranch {
    /// Parameter intervals in which three steady states coexist, bounded by
    /// the refined bifurcation values where available.
    pub fn three_root_intervals(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let n = self.values.len();
        let mut i = 0;
        while i < n {
            if self.roots[i].len() != 3 {
                i += 1;
                continue;
            }
            let start = i;
            while i < n && self.roots[i].len() == 3 {
                i += 1;
            }
            let end = i - 1;
            let lo = if start > 0 {
                self.bifurcation_between(self.values[start - 1], self.values[start])
            } else {
                None
            }
            .unwrap_or(self.values[start]);
            let hi = if end + 1 < n {
                self.bifurcation_between(self.values[end], self.values[end + 1])
            } else {
                None
            }
            .unwrap_or(self.values[end]);
            out.push((lo.min(hi), lo.max(hi)));
        }
        out
    }

    /// Total width of the three-root intervals.
    pub fn three_root_width(&self) -> f64 {
        self.three_root_intervals()
            .iter()
            .fold(0.0, |acc, (a, b)| acc + (b - a))
    }

    pub fn peak_amplitude(&self) -> f64 {
        self.roots
            .iter()
            .flatten()
            .map(|r| r.amp)
            .fold(0.0, f64::max)
    }

    fn bifurcation_between(&self, a: f64, b: f64) -> Option<f64> {
        let (lo, hi) = (a.min(b), a.max(b));
        self.bifurcations
            .iter()
            .find(|bf| bf.value >= lo && bf.value <= hi)
            .map(|bf| bf.value)
    }
}

fn params_at(base: &MmsParams, var: SweepVar, value: f64) -> MmsParams {
    let mut p = *base;
    match var {
        SweepVar::Delta => {}
        SweepVar::Alpha => p.alpha = value,
        SweepVar::ERatio => p.e_r = value,
        SweepVar::Force => p.f = value,
    }
    p
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(input("sweep grid is empty"));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(input("sweep grid contains non-finite values"));
    }
    let inc = grid.windows(2).all(|w| w[1] > w[0]);
    let dec = grid.windows(2).all(|w| w[1] < w[0]);
    if !(inc || dec) {
        return Err(input("sweep grid must be strictly monotone"));
    }
    Ok(())
}

/// Sweeps `var` over `grid` at fixed detuning `delta` (ignored when the
/// detuning itself is swept).
pub fn parameter_sweep(
    params: &MmsParams,
    var: SweepVar,
    grid: &[f64],
    delta: f64,
) -> Result<ResponseBranch> {
    check_grid(grid)?;
    let eval = |value: f64| -> Result<(MmsParams, f64)> {
        let p = params_at(params, var, value);
        p.validate()?;
        let d = if var == SweepVar::Delta { value } else { delta };
        Ok((p, d))
    };
    let points: Vec<(Vec<SteadyStateRoot>, f64)> = grid
        .par_iter()
        .map(|&v| {
            let (p, d) = eval(v)?;
            let c = steady_state_cubic(&p, d)?;
            Ok((solve_steady_amplitudes(&c)?, c.discriminant()))
        })
        .collect::<Result<_>>()?;
    let (roots, discs): (Vec<_>, Vec<_>) = points.into_iter().unzip();

    let disc_at = |v: f64| -> f64 {
        eval(v)
            .and_then(|(p, d)| steady_state_cubic(&p, d))
            .map(|c| c.discriminant())
            .unwrap_or(f64::NAN)
    };
    let bifurcations = (0..grid.len().saturating_sub(1))
        .into_par_iter()
        .filter(|&i| {
            discs[i] != 0.0 && discs[i + 1] != 0.0 && (discs[i] > 0.0) != (discs[i + 1] > 0.0)
        })
        .map(|i| {
            let (lo, hi) = (grid[i].min(grid[i + 1]), grid[i].max(grid[i + 1]));
            let value = bisect(disc_at, lo, hi, BIFURCATION_TOL);
            let (p, d) = eval(value)?;
            let amp = double_root_amp(&solve_steady_amplitudes(&steady_state_cubic(&p, d)?)?);
            Ok(Bifurcation { value, amp })
        })
        .collect::<Result<Vec<_>>>()?;

    let branch_ids = continue_branches(&roots);
    Ok(ResponseBranch {
        variable: var,
        values: grid.to_vec(),
        roots,
        branch_ids,
        bifurcations,
    })
}

/// Detuning sweep with optional parameter overrides.
pub fn frequency_sweep(
    params: &MmsParams,
    delta_grid: &[f64],
    overrides: SweepOverrides,
) -> Result<ResponseBranch> {
    let p = overrides.apply(params);
    if !(p.alpha > 0.0 && p.alpha <= 1.0) {
        return Err(domain(format!(
            "fractional order must lie in (0, 1], got {}",
            p.alpha
        )));
    }
    parameter_sweep(&p, SweepVar::Delta, delta_grid, 0.0)
}

/// Mean amplitude of the closest pair of roots, or the lone root.
fn double_root_amp(roots: &[SteadyStateRoot]) -> f64 {
    if roots.len() < 2 {
        return roots.first().map_or(0.0, |r| r.amp);
    }
    roots
        .windows(2)
        .min_by(|a, b| (a[1].amp - a[0].amp).total_cmp(&(b[1].amp - b[0].amp)))
        .map(|w| 0.5 * (w[0].amp + w[1].amp))
        .unwrap_or(0.0)
}

/// Nearest-amplitude continuation. A root joins an existing branch when
/// the jump is within ten times that branch's last step (with a floor tied
/// to the overall amplitude scale); a branch seen at a single point has no
/// step yet and accepts its nearest root. Unmatched roots start new branches.
fn continue_branches(roots: &[Vec<SteadyStateRoot>]) -> Vec<Vec<usize>> {
    let scale = roots.iter().flatten().map(|r| r.amp).fold(0.0, f64::max);
    let floor = 1e-3 * scale + f64::MIN_POSITIVE;
    // (id, last amplitude, last step or None)
    let mut active: Vec<(usize, f64, Option<f64>)> = Vec::new();
    let mut next_id = 0;
    let mut ids = Vec::with_capacity(roots.len());
    for point in roots {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (ri, r) in point.iter().enumerate() {
            for (bi, &(_, last, step)) in active.iter().enumerate() {
                let jump = (r.amp - last).abs();
                if step.is_none_or(|st| jump <= 10.0 * st.max(floor)) {
                    pairs.push((jump, ri, bi));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut root_branch: Vec<Option<usize>> = vec![None; point.len()];
        let mut used = vec![false; active.len()];
        for (_, ri, bi) in pairs {
            if root_branch[ri].is_none() && !used[bi] {
                root_branch[ri] = Some(bi);
                used[bi] = true;
            }
        }
        let mut next_active = Vec::with_capacity(point.len());
        let mut point_ids = Vec::with_capacity(point.len());
        for (ri, r) in point.iter().enumerate() {
            let entry = match root_branch[ri] {
                Some(bi) => {
                    let (id, last, _) = active[bi];
                    (id, r.amp, Some((r.amp - last).abs()))
                }
                None => {
                    next_id += 1;
                    (next_id - 1, r.amp, None)
                }
            };
            point_ids.push(entry.0);
            next_active.push(entry);
        }
        active = next_active;
        ids.push(point_ids);
    }
    ids
}

#[cfg(test)]
mod tests {
    use super::super::tests::case1;
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(frequency_sweep(&case1(0.3, 0.4), &[], SweepOverrides::default()).is_err());
        assert!(frequency_sweep(
            &case1(0.3, 0.4),
            &[1.0, 0.5, 2.0],
            SweepOverrides::default()
        )
        .is_err());
    }

    #[test]
    fn hysteresis_window_is_bounded_by_bifurcations() {
        let ov = SweepOverrides {
            alpha: Some(0.2),
            ..Default::default()
        };
        let br = frequency_sweep(&case1(0.3, 0.5), &grid(0.0, 3.0, 301), ov).unwrap();
        assert_eq!(br.bifurcations.len(), 2);
        let iv = br.three_root_intervals();
        assert_eq!(iv.len(), 1);
        assert_eq!(iv[0].0, br.bifurcations[0].value);
        assert_eq!(iv[0].1, br.bifurcations[1].value);
        for bf in &br.bifurcations {
            // double root: the cubic and its derivative both vanish
            let p = ov.apply(&case1(0.3, 0.5));
            let c = steady_state_cubic(&p, bf.value).unwrap();
            let [a, b, cc, _] = c.cubic();
            let x = bf.amp * bf.amp;
            let dp = (3.0 * a * x + 2.0 * b) * x + cc;
            assert!(dp.abs() < 1e-3 * cc.abs().max(1.0), "{dp}");
        }
        for (roots, ids) in br.roots.iter().zip(&br.branch_ids) {
            assert!(roots.len() == 1 || roots.len() == 3);
            assert_eq!(roots.len(), ids.len());
        }
    }

    #[test]
    fn sweep_output_is_ordered_like_the_grid() {
        let g = grid(-1.0, 2.0, 64);
        let br = frequency_sweep(&case1(0.3, 0.5), &g, SweepOverrides::default()).unwrap();
        assert_eq!(br.values, g);
        for (v, roots) in g.iter().zip(&br.roots) {
            let c = steady_state_cubic(&case1(0.3, 0.5), *v).unwrap();
            assert_eq!(&solve_steady_amplitudes(&c).unwrap(), roots);
        }
    }

    #[test]
    fn order_sweep_validates_range() {
        let p = case1(0.3, 0.5);
        assert!(parameter_sweep(&p, SweepVar::Alpha, &[0.5, 1.5], 0.3).is_err());
        let br = parameter_sweep(&p, SweepVar::ERatio, &grid(0.1, 1.0, 10), 0.3).unwrap();
        assert_eq!(br.roots.len(), 10);
    }
}
