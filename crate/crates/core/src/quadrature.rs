//! Adaptive Simpson quadrature for piecewise-smooth complex integrands.

use num_complex::Complex64 as C64;

const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 8;
const SCALE_PANELS: usize = 16;

/// `∫_a^b f(t) dt` to relative tolerance `rel_tol`, measured against
/// `∫|f|`. The interval is split at every breakpoint inside `(a, b)` and each
/// piece is evaluated with one-sided endpoint limits, so jumps located on
/// breakpoints cost nothing.
pub fn integrate(f: impl Fn(f64) -> C64, a: f64, b: f64, breakpoints: &[f64], rel_tol: f64) -> C64 {
    if !(b > a) {
        return C64::new(0.0, 0.0);
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.insert(0, a);
    cuts.push(b);

    let pieces: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let scale: f64 = pieces.iter().map(|&(lo, hi)| abs_scale(&f, lo, hi)).sum();
    if scale == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let total_len = b - a;
    pieces
        .iter()
        .map(|&(lo, hi)| {
            let eps = rel_tol * scale * (hi - lo) / total_len;
            piece(&f, lo, hi, eps)
        })
        .sum()
}

/// Evaluates `f` just inside `[lo, hi]` at the endpoints.
fn inside(f: &impl Fn(f64) -> C64, t: f64, lo: f64, hi: f64) -> C64 {
    let nudge = 8.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(hi - lo);
    f(t.clamp(lo + nudge, hi - nudge))
}

fn abs_scale(f: &impl Fn(f64) -> C64, lo: f64, hi: f64) -> f64 {
    let h = (hi - lo) / SCALE_PANELS as f64;
    (0..=SCALE_PANELS)
        .map(|k| {
            let w = if k == 0 || k == SCALE_PANELS {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * inside(f, lo + k as f64 * h, lo, hi).norm()
        })
        .sum::<f64>()
        * h
        / 3.0
}

fn piece(f: &impl Fn(f64) -> C64, lo: f64, hi: f64, eps: f64) -> C64 {
    let h = (hi - lo) / INITIAL_PANELS as f64;
    (0..INITIAL_PANELS)
        .map(|k| {
            let a = lo + k as f64 * h;
            let b = if k + 1 == INITIAL_PANELS { hi } else { a + h };
            let m = 0.5 * (a + b);
            let (fa, fm, fb) = (
                inside(f, a, lo, hi),
                inside(f, m, lo, hi),
                inside(f, b, lo, hi),
            );
            let whole = (b - a) / 6.0 * (fa + fm * 4.0 + fb);
            recurse(
                f,
                (lo, hi),
                a,
                b,
                fa,
                fm,
                fb,
                whole,
                eps / INITIAL_PANELS as f64,
                MAX_DEPTH,
            )
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> C64,
    span: (f64, f64),
    a: f64,
    b: f64,
    fa: C64,
    fm: C64,
    fb: C64,
    whole: C64,
    eps: f64,
    depth: u32,
) -> C64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let flm = inside(f, lm, span.0, span.1);
    let frm = inside(f, rm, span.0, span.1);
    let left = (m - a) / 6.0 * (fa + flm * 4.0 + fm);
    let right = (b - m) / 6.0 * (fm + frm * 4.0 + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    recurse(f, span, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + recurse(f, span, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        let v = integrate(|t| C64::new(t * t, 0.0), 0.0, 3.0, &[], 1e-10);
        assert!((v.re - 9.0).abs() < 1e-12);
        let v = integrate(|t| C64::from_polar(1.0, 2.0 * t), 0.0, 1.0, &[], 1e-10);
        let exact = (C64::from_polar(1.0, 2.0) - 1.0) / C64::new(0.0, 2.0);
        assert!((v - exact).norm() < 1e-10);
    }

    #[test]
    fn jump_on_breakpoint() {
        let step = |t: f64| C64::new(if t <= 0.5 { 1.0 } else { 0.0 }, 0.0);
        let v = integrate(step, 0.0, 1.0, &[0.5], 1e-10);
        assert!((v.re - 0.5).abs() < 1e-13);
    }

    #[test]
    fn zero_integrand_and_empty_interval() {
        assert_eq!(
            integrate(|_| C64::new(0.0, 0.0), 0.0, 5.0, &[], 1e-8),
            C64::new(0.0, 0.0)
        );
        assert_eq!(
            integrate(|_| C64::new(1.0, 0.0), 2.0, 2.0, &[], 1e-8),
            C64::new(0.0, 0.0)
        );
    }
}
