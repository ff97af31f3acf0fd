use crate::error::{Error, Result};

/// Bisection stops once the bracket is narrower than this.
pub const ROOT_TOL: f64 = 1e-12;

/// Sign-change scan of `f` on `[lo, hi]` with sample spacing `resolution`,
/// refined by bisection to [`ROOT_TOL`].
///
/// Samples that are exactly zero are reported as roots. Only odd-order zeros
/// (and poles where `f` changes sign) are bracketed; non-finite samples are
/// skipped.
pub fn scan_zeros<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, resolution: f64) -> Result<Vec<f64>> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::InvalidParams(format!("scan resolution {resolution}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidParams(format!("scan interval [{lo}, {hi}]")));
    }
    let cells = ((hi - lo) / resolution).ceil().max(1.0) as usize;
    let at = |i: usize| {
        if i == cells {
            hi
        } else {
            lo + (hi - lo) * i as f64 / cells as f64
        }
    };

    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|&last| (r - last).abs() > ROOT_TOL) {
            roots.push(r);
        }
    };

    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=cells {
        let x = at(i);
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if fx == 0.0 {
            push(x, &mut roots);
        } else if let Some((xp, fp)) = prev {
            if fp != 0.0 && fp.signum() != fx.signum() {
                push(bisect(&f, xp, fp, x), &mut roots);
            }
        }
        prev = Some((x, fx));
    }
    Ok(roots)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut fa: f64, mut b: f64) -> f64 {
    while (b - a).abs() > ROOT_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.is_nan() || fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
