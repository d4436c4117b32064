//! Bracketing root finders for scalar functions of one variable.

use crate::error::{Error, Result};

/// Points where `f ≥ 0` count as "inside"; roots are transitions between
/// inside and outside.
#[inline]
pub fn inside(v: f64) -> bool {
    v >= 0.0
}

/// Bisects `[lo, hi]` until the bracket cannot be split further in floating
/// point. `f(lo)` and `f(hi)` must lie on different sides of zero (in the
/// [`inside`] sense). Returns the endpoint of the final bracket with the
/// smaller `|f|`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if inside(f_lo) == inside(f_hi) {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if inside(f_mid) == inside(f_lo) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

/// Samples `f` at `n + 1` equally spaced parameters on `[t0, t1]` and refines
/// every inside/outside transition by bisection. Roots come back in
/// parameter order.
pub fn scan_roots(f: impl Fn(f64) -> f64, t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    let at = |k: usize| if k == n { t1 } else { t0 + (t1 - t0) * (k as f64 / n as f64) };
    let mut roots = Vec::new();
    let mut prev_t = t0;
    let mut prev = f(t0);
    for k in 1..=n {
        let t = at(k);
        let v = f(t);
        if inside(v) != inside(prev) {
            if let Ok(r) = bisect(&f, prev_t, t) {
                roots.push(r);
            }
        }
        prev_t = t;
        prev = v;
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| 2.0 - x * x, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 4e-16);
    }

    #[test]
    fn bisect_requires_sign_change() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0), Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn scan_finds_all_sine_roots_in_order() {
        let roots = scan_roots(f64::sin, 0.5, 10.0, 1000);
        let expected = [std::f64::consts::PI, 2.0 * std::f64::consts::PI, 3.0 * std::f64::consts::PI];
        assert_eq!(roots.len(), 3);
        for (r, e) in roots.iter().zip(expected) {
            assert!((r - e).abs() < 1e-14);
        }
    }

    #[test]
    fn scan_reversed_interval() {
        let roots = scan_roots(|x| x - 1.0, 3.0, -3.0, 10);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.0).abs() < 1e-15);
    }
}
