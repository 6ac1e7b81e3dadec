//! Scalar bracketing and bisection helpers shared by the eigenvalue search,
//! the critical-order search and the bifurcation locator.

/// Bisects `f` on `[lo, hi]` until the bracket is narrower than `tol` or
/// cannot be split further in floating point.
///
/// `f(lo)` and `f(hi)` must differ in sign (or one of them is zero).
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Scans `[start, end]` on a uniform grid of spacing `step` and returns
/// every sub-interval over which `f` changes sign.
pub fn sign_change_brackets<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    end: f64,
    step: f64,
) -> Vec<(f64, f64)> {
    let n = ((end - start) / step).floor() as usize;
    let mut out = Vec::new();
    let mut x_prev = start;
    let mut f_prev = f(start);
    for i in 1..=n {
        let x = start + i as f64 * step;
        let fx = f(x);
        if f_prev == 0.0 || (fx < 0.0) != (f_prev < 0.0) && fx != 0.0 {
            out.push((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 1.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn scan_reports_each_crossing_once() {
        let br = sign_change_brackets(f64::sin, 0.5, 10.0, 0.01);
        assert_eq!(br.len(), 3);
        for ((lo, hi), k) in br.iter().zip(1..) {
            let root = k as f64 * std::f64::consts::PI;
            assert!(*lo <= root && root <= *hi);
        }
    }
}
