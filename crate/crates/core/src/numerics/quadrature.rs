//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Kronrod abscissae on `[-1, 1]`, descending, last one is the centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes (7-point rule).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and subdivision budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut finite = fc.is_finite();
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        finite &= pair.is_finite();
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    if !finite {
        return Err(Error::NonFinite {
            what: "integrand",
            t: centre,
        });
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// `∫_{lo}^{hi} f` with error at most `max(abs_tol, rel_tol·|value|)`.
///
/// Reversed bounds flip the sign; an empty interval integrates to zero.
pub fn quadrature<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(opts.abs_tol > 0.0 && opts.rel_tol > 0.0) {
        return Err(Error::InvalidParams("quadrature tolerances must be positive".into()));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParams(format!("bounds [{lo}, {hi}] must be finite")));
    }
    if lo == hi {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            intervals: 0,
            evaluations: 0,
        });
    }
    if hi < lo {
        let r = quadrature(f, hi, lo, opts)?;
        return Ok(QuadratureResult {
            value: -r.value,
            ..r
        });
    }

    let (value, error) = gk15(&f, lo, hi)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        lo,
        hi,
        value,
        error,
    });
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 15;

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureDiverged {
                lo,
                hi,
                estimate: total_err,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Interval cannot be split further in floating point.
            return Err(Error::QuadratureDiverged {
                lo,
                hi,
                estimate: total_err,
                intervals: heap.len() + 1,
            });
        }
        let (v1, e1) = gk15(&f, worst.lo, mid)?;
        let (v2, e2) = gk15(&f, mid, worst.hi)?;
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            lo: worst.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            lo: mid,
            hi: worst.hi,
            value: v2,
            error: e2,
        });
    }

    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().map(|s| s.value).sum();
    let error_estimate = heap.iter().map(|s| s.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate,
        intervals: heap.len(),
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_rule_is_exact_for_high_degree_monomials() {
        // The 15-point Kronrod rule integrates degree ≤ 22 exactly.
        for deg in 0..=22 {
            let (v, _) = gk15(&|x: f64| x.powi(deg), -1.0, 1.0).unwrap();
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            assert!((v - exact).abs() < 1e-14, "degree {deg}: {v} vs {exact}");
        }
    }

    #[test]
    fn arctan_example_integrals() {
        let o = QuadratureOptions::default();
        let poly = quadrature(|t: f64| (t * t + 1.0).powi(3), 0.0, 1.0, &o).unwrap();
        assert!((poly.value - 96.0 / 35.0).abs() < 1e-14);
        let zero = quadrature(|_| 0.0, 0.0, 1.0, &o).unwrap();
        assert_eq!(zero.value, 0.0);
        let rational = quadrature(|t: f64| 2.0 * (t * t - 1.0) / (t * t + 1.0), 0.0, 1.0, &o).unwrap();
        assert!((rational.value - (2.0 - std::f64::consts::PI)).abs() < 1e-12);
    }

    #[test]
    fn reversed_bounds_and_refinement() {
        let o = QuadratureOptions::default();
        let r = quadrature(|t: f64| (10.0 * t).sin(), 3.0, 0.0, &o).unwrap();
        let exact = -(1.0 - 30.0_f64.cos()) / 10.0;
        assert!((r.value - exact).abs() < 1e-10);
        assert!(r.intervals > 1);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let o = QuadratureOptions {
            max_intervals: 4,
            ..Default::default()
        };
        let r = quadrature(|t: f64| (t.abs() + 1e-9).sqrt().recip(), -1.0, 1.0, &o);
        assert!(matches!(r, Err(Error::QuadratureDiverged { .. })));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = quadrature(|t: f64| 1.0 / t, 0.0, 1.0, &QuadratureOptions::default());
        assert!(r.is_err());
    }
}
