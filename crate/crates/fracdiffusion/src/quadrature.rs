//! Adaptive Simpson quadrature with Richardson correction.

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, 52)
}

/// Integrate over consecutive panels `pts[0]..pts[1]..…`, splitting the
/// tolerance evenly. Breakpoints let callers seed known features (peaks,
/// kinks, knees) so the recursion does not have to discover them.
pub fn adaptive_simpson_panels<F: Fn(f64) -> f64>(f: &F, pts: &[f64], tol: f64) -> f64 {
    assert!(pts.len() >= 2, "need at least one panel");
    let per_panel = tol / (pts.len() - 1) as f64;
    pts.windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], per_panel))
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let s2 = left + right;
    let err = s2 - whole;
    if depth == 0 || err.abs() <= 15.0 * tol || lm <= a || rm >= b {
        s2 + err / 15.0
    } else {
        refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_nearly_exact() {
        let val = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-13);
        assert!((val - 2.0).abs() < 1e-13); // ∫₀² (x³−2x+1) = 4 − 4 + 2
    }

    #[test]
    fn sine_to_tight_tolerance() {
        let val = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-13);
        assert!((val - 2.0).abs() < 1e-12);
    }

    #[test]
    fn panels_handle_a_kink() {
        // |x − 1/2| on [0,1]: kink seeded as a breakpoint
        let f = |x: f64| (x - 0.5).abs();
        let val = adaptive_simpson_panels(&f, &[0.0, 0.5, 1.0], 1e-13);
        assert!((val - 0.25).abs() < 1e-13);
    }

    #[test]
    fn rapidly_decaying_tail() {
        let val = adaptive_simpson(&|x: f64| (-x).exp(), 0.0, 40.0, 1e-13);
        assert!((val - 1.0).abs() < 1e-11);
    }
}
