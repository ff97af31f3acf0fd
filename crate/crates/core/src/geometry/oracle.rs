//! Finite-difference Ricci tensor of the full coordinate metric.
//!
//! The oracle only evaluates `h′`. Christoffel symbols come from central
//! differences of the metric components; the Ricci tensor from central
//! differences of the Christoffel symbols. Both stages are `O(step²)`.

use nalgebra::DMatrix;

use super::profile::{SolitonParams, WarpProfile, ZERO_WARP_EPS};
use crate::error::{Error, Result};

/// Coordinate models for the `(n−1)`-dimensional fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FibreModel {
    /// Flat torus in Cartesian coordinates, `λ* = 0`.
    Flat,
    /// Unit round sphere in polar coordinates, `λ* = n − 2`.
    RoundSphere,
}

impl FibreModel {
    pub fn einstein_constant(self, n: usize) -> f64 {
        match self {
            FibreModel::Flat => 0.0,
            FibreModel::RoundSphere => n as f64 - 2.0,
        }
    }

    /// Fibre coordinates used by [`oracle_ricci`].
    pub fn reference_point(self, n: usize) -> Vec<f64> {
        match self {
            FibreModel::Flat => vec![0.0; n - 1],
            // Polar angles well away from the poles.
            FibreModel::RoundSphere => (0..n - 1).map(|i| 1.0 + 0.1 * i as f64).collect(),
        }
    }
}

/// Result of the finite-difference evaluation.
#[derive(Debug, Clone)]
pub struct OracleRicci {
    /// Coordinates `(t, x¹, …, xⁿ⁻¹)` of the evaluation point.
    pub coords: Vec<f64>,
    pub metric: DMatrix<f64>,
    pub ricci: DMatrix<f64>,
    pub step: f64,
    /// Max-norm of `Ric(step) − Ric(2·step)` divided by 3 (Richardson).
    pub error_estimate: f64,
}

impl OracleRicci {
    /// Diagonal of the mixed tensor `g⁻¹ Ric`; for the warped product these
    /// are `Ric(∂t,∂t)` followed by `n−1` copies of the orthogonal component.
    pub fn unit_diagonal(&self) -> Vec<f64> {
        let inv = self
            .metric
            .clone()
            .try_inverse()
            .expect("metric was inverted during evaluation");
        let mixed = inv * &self.ricci;
        (0..mixed.nrows()).map(|i| mixed[(i, i)]).collect()
    }
}

/// Ricci matrix at `t` and the fibre model's reference point.
pub fn oracle_ricci(
    h: &WarpProfile,
    p: &SolitonParams,
    fibre: FibreModel,
    t: f64,
    step: f64,
) -> Result<OracleRicci> {
    let mut coords = vec![t];
    coords.extend(fibre.reference_point(p.n));
    oracle_ricci_at(h, p, fibre, &coords, step)
}

/// Ricci matrix at explicit coordinates `(t, x¹, …, xⁿ⁻¹)`.
pub fn oracle_ricci_at(
    h: &WarpProfile,
    p: &SolitonParams,
    fibre: FibreModel,
    coords: &[f64],
    step: f64,
) -> Result<OracleRicci> {
    p.validate()?;
    if !(2..=4).contains(&p.n) {
        return Err(Error::Unsupported(format!(
            "finite-difference oracle supports n ∈ {{2, 3, 4}}, got {}",
            p.n
        )));
    }
    if coords.len() != p.n {
        return Err(Error::InvalidParams(format!(
            "expected {} coordinates, got {}",
            p.n,
            coords.len()
        )));
    }
    let lambda = fibre.einstein_constant(p.n);
    if (p.lambda_star - lambda).abs() > 1e-12 {
        return Err(Error::InvalidParams(format!(
            "{fibre:?} fibre has λ* = {lambda}, params carry {}",
            p.lambda_star
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParams(format!("step {step}")));
    }

    // The doubled-step stencil reaches 2·step away.
    let reach = 2.0 * step;
    let t = coords[0];
    let centre_sign = h.eval(t).signum();
    for s in [t - reach, t, t + reach] {
        h.check_domain(s)?;
        let w = h.eval(s);
        if !w.is_finite() {
            return Err(Error::NonFinite {
                what: "warp profile",
                t: s,
            });
        }
        if w.abs() < ZERO_WARP_EPS || w.signum() != centre_sign {
            return Err(Error::ZeroWarp { t: s });
        }
    }
    if fibre == FibreModel::RoundSphere {
        // Angles θ¹..θⁿ⁻² carry sin² factors; the last one is azimuthal.
        for &theta in coords.iter().skip(1).take(p.n.saturating_sub(2)) {
            if theta.sin().abs() < (10.0 * reach).max(1e-6) {
                return Err(Error::ChartSingularity { coord: theta });
            }
        }
    }

    let metric_at = |x: &[f64]| metric(h, fibre, x);
    let ricci = ricci_fd(&metric_at, coords, step)?;
    let coarse = ricci_fd(&metric_at, coords, 2.0 * step)?;
    let error_estimate = (&ricci - &coarse).amax() / 3.0;
    let scale = 1.0 + ricci.amax();
    if error_estimate.is_nan() || error_estimate > 1e-3 * scale {
        return Err(Error::StepTooLarge {
            step,
            estimate: error_estimate,
        });
    }

    Ok(OracleRicci {
        coords: coords.to_vec(),
        metric: metric_at(coords),
        ricci,
        step,
        error_estimate,
    })
}

fn metric(h: &WarpProfile, fibre: FibreModel, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let w = h.eval(x[0]);
    let mut g = DMatrix::zeros(n, n);
    g[(0, 0)] = 1.0;
    let mut factor = w * w;
    for i in 1..n {
        g[(i, i)] = factor;
        if fibre == FibreModel::RoundSphere {
            factor *= x[i].sin().powi(2);
        }
    }
    g
}

/// Ricci tensor from central differences of the metric at spacing `step`.
///
/// `∂g` uses the three-point stencil, `∂∂g` the three-point second
/// difference on the diagonal and the four-point cross stencil off it. Then
///
/// ```text
/// Γᵏᵢⱼ   = ½ gᵏᵐ (∂ᵢgₘⱼ + ∂ⱼgₘᵢ − ∂ₘgᵢⱼ)
/// ∂ₗΓᵏᵢⱼ = ½ ∂ₗgᵏᵐ (…) + ½ gᵏᵐ (∂ₗ∂ᵢgₘⱼ + ∂ₗ∂ⱼgₘᵢ − ∂ₗ∂ₘgᵢⱼ)
/// Rᵢⱼ    = ∂ₖΓᵏᵢⱼ − ∂ⱼΓᵏᵢₖ + ΓᵏₖₗΓˡᵢⱼ − ΓᵏⱼₗΓˡᵢₖ
/// ```
///
/// with `∂ₗg⁻¹ = −g⁻¹ (∂ₗg) g⁻¹`.
fn ricci_fd(metric_at: &dyn Fn(&[f64]) -> DMatrix<f64>, x: &[f64], step: f64) -> Result<DMatrix<f64>> {
    let n = x.len();
    let g0 = metric_at(x);
    let inv = g0.clone().try_inverse().ok_or(Error::ZeroWarp { t: x[0] })?;
    let at = |shifts: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(i, d) in shifts {
            y[i] += d;
        }
        metric_at(&y)
    };
    let h = step;
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|m| (at(&[(m, h)]) - at(&[(m, -h)])) / (2.0 * h))
        .collect();
    let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
    for l in 0..n {
        ddg[l][l] = (at(&[(l, h)]) - &g0 * 2.0 + at(&[(l, -h)])) / (h * h);
        for m in 0..l {
            let cross = (at(&[(l, h), (m, h)]) - at(&[(l, h), (m, -h)]) - at(&[(l, -h), (m, h)])
                + at(&[(l, -h), (m, -h)]))
                / (4.0 * h * h);
            ddg[l][m] = cross.clone();
            ddg[m][l] = cross;
        }
    }
    let dinv: Vec<DMatrix<f64>> = dg.iter().map(|d| -(&inv * d * &inv)).collect();

    // first[i][j][m] = ∂ᵢgₘⱼ + ∂ⱼgₘᵢ − ∂ₘgᵢⱼ
    let first = |i: usize, j: usize, m: usize| dg[i][(m, j)] + dg[j][(m, i)] - dg[m][(i, j)];
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    // dgamma[l][k][i][j] = ∂ₗΓᵏᵢⱼ
    let mut dgamma = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                gamma[k][i][j] = 0.5 * (0..n).map(|m| inv[(k, m)] * first(i, j, m)).sum::<f64>();
                for (l, dl) in dgamma.iter_mut().enumerate() {
                    dl[k][i][j] = 0.5
                        * (0..n)
                            .map(|m| {
                                dinv[l][(k, m)] * first(i, j, m)
                                    + inv[(k, m)]
                                        * (ddg[l][i][(m, j)] + ddg[l][j][(m, i)] - ddg[l][m][(i, j)])
                            })
                            .sum::<f64>();
                }
            }
        }
    }

    let mut ric = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut r = 0.0;
            for k in 0..n {
                r += dgamma[k][k][i][j] - dgamma[j][k][i][k];
                for l in 0..n {
                    r += gamma[k][k][l] * gamma[l][i][j] - gamma[k][j][l] * gamma[l][i][k];
                }
            }
            ric[(i, j)] = r;
        }
    }
    Ok(ric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ricci_orthogonal, ricci_tt, Interval};

    fn tanh() -> WarpProfile {
        WarpProfile::new(
            "tanh",
            Interval::REAL_LINE,
            f64::tanh,
            |t: f64| 1.0 / t.cosh().powi(2),
            |t: f64| -2.0 * t.tanh() / t.cosh().powi(2),
        )
    }

    #[test]
    fn polar_coordinates_of_flat_space() {
        let h = WarpProfile::new("t", Interval::POSITIVE, |t| t, |_| 1.0, |_| 0.0);
        let p = SolitonParams::ricci(3, 1.0).unwrap();
        let r = oracle_ricci(&h, &p, FibreModel::RoundSphere, 1.0, 1e-3).unwrap();
        assert!(r.ricci.amax() < 1e-5, "{}", r.ricci);
    }

    #[test]
    fn cigar_diagonal_matches_closed_form() {
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        let r = oracle_ricci(&tanh(), &p, FibreModel::Flat, 1.0, 1e-3).unwrap();
        let d = r.unit_diagonal();
        assert!((d[0] - ricci_tt(&tanh(), &p, 1.0).unwrap()).abs() < 1e-5);
        assert!((d[1] - ricci_orthogonal(&tanh(), &p, 1.0).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn product_with_round_sphere() {
        let h = WarpProfile::new("one", Interval::REAL_LINE, |_| 1.0, |_| 0.0, |_| 0.0);
        let p = SolitonParams::ricci(3, 1.0).unwrap();
        let r = oracle_ricci(&h, &p, FibreModel::RoundSphere, 0.5, 1e-3).unwrap();
        let d = r.unit_diagonal();
        assert!(d[0].abs() < 1e-5);
        assert!((d[1] - 1.0).abs() < 1e-5);
        assert!((d[2] - 1.0).abs() < 1e-5);
        // Off-diagonal entries vanish.
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(r.ricci[(i, j)].abs() < 1e-5);
                }
            }
        }
    }

    #[test]
    fn rejects_chart_poles_and_mismatched_fibre() {
        let h = WarpProfile::new("one", Interval::REAL_LINE, |_| 1.0, |_| 0.0, |_| 0.0);
        let p = SolitonParams::ricci(3, 1.0).unwrap();
        let err = oracle_ricci_at(&h, &p, FibreModel::RoundSphere, &[0.0, 1e-4, 0.3], 1e-3);
        assert!(matches!(err, Err(Error::ChartSingularity { .. })));
        let err = oracle_ricci(&h, &p, FibreModel::Flat, 0.0, 1e-3);
        assert!(matches!(err, Err(Error::InvalidParams(_))));
        let p5 = SolitonParams::ricci(5, 3.0).unwrap();
        assert!(matches!(
            oracle_ricci(&h, &p5, FibreModel::RoundSphere, 0.0, 1e-3),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn oversized_step_fails_consistency_check() {
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        let err = oracle_ricci(&tanh(), &p, FibreModel::Flat, 1.5, 0.5);
        assert!(matches!(err, Err(Error::StepTooLarge { .. })), "{err:?}");
    }

    #[test]
    fn stencil_must_avoid_warp_zeros() {
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        let err = oracle_ricci(&tanh(), &p, FibreModel::Flat, 0.002, 1e-3);
        assert!(matches!(err, Err(Error::ZeroWarp { .. })), "{err:?}");
    }
}
