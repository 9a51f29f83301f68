//! Small adaptive Simpson quadrature used by the geometry and metrology modules.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("quadrature did not converge: requested abs tol {requested:e}, achieved {achieved:e}")]
pub struct QuadError {
    pub requested: f64,
    pub achieved: f64,
}

const MAX_DEPTH: u32 = 40;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by adaptive
/// Simpson bisection. Returns the value and an error estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<(f64, f64), QuadError> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let (value, err) = recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH);
    if err > tol.max(1e-14 * value.abs()) {
        return Err(QuadError { requested: tol, achieved: err });
    }
    Ok((value, err))
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // standard Richardson factor for Simpson's rule
    if depth == 0 || delta.abs() <= 15.0 * tol {
        (left + right + delta / 15.0, delta.abs() / 15.0)
    } else {
        let (lv, le) = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
        let (rv, re) = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        (lv + rv, le + re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let (v, _) = adaptive_simpson(&|x: f64| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(v, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn smooth_transcendental() {
        let (v, _) = adaptive_simpson(&f64::sin, 0.0, std::f64::consts::PI, 1e-10).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn narrow_feature_resolved() {
        // Lorentzian of width 1e-3 centered mid-interval
        let w = 1e-3;
        let (v, _) = adaptive_simpson(&|x: f64| w / (w * w + (x - 0.5).powi(2)), 0.0, 1.0, 1e-9).unwrap();
        let exact = ((0.5 / w).atan() - (-0.5 / w).atan()) as f64;
        assert_relative_eq!(v, exact, max_relative = 1e-8);
    }
}
