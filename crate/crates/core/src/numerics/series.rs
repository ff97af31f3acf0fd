//! Power-series solutions `h′ = Σ aᵢ tⁱ`, `f′ = Σ bⱼ tʲ` of the soliton
//! system with `a = b = 1` and constant `c`, under the odd ansatz.
//!
//! Both equations are used with the denominator `h′` cleared:
//!
//! ```text
//! radial:     −(n−1) h‴ + f″ h′ + c h′                       = 0
//! orthogonal: (n−2) h″² + h′ h‴ − f′ h′ h″ − c h′² − λ*       = 0
//! ```
//!
//! Under the odd ansatz the radial equation only has odd powers and the
//! orthogonal one only even powers. The pair (radial at `t^k`, orthogonal at
//! `t^{k+1}`) is linear in the unknowns `(a_{k+2}, b_k)` for odd `k`, so the
//! coefficients follow order by order from a 2×2 solve. At `k = 1` the
//! system is rank one and `b₁` is a seed; the orthogonal equation at `t⁰`
//! forces `(n−2) a₁² = λ*`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesParams {
    pub n: usize,
    pub c: f64,
    pub lambda_star: f64,
    pub a1: f64,
    pub b1: f64,
    /// Even seeds; anything but zero leaves the odd ansatz.
    pub a0: f64,
    pub b0: f64,
}

impl SeriesParams {
    pub fn odd(n: usize, c: f64, lambda_star: f64, a1: f64, b1: f64) -> Self {
        Self {
            n,
            c,
            lambda_star,
            a1,
            b1,
            a0: 0.0,
            b0: 0.0,
        }
    }
}

/// Truncated coefficients `a₀..a_N` of `h′` and `b₀..b_N` of `f′`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesState {
    pub coeffs_a: Vec<f64>,
    pub coeffs_b: Vec<f64>,
    pub order: usize,
    pub params: SeriesParams,
}

fn at(v: &[f64], i: isize) -> f64 {
    if i < 0 {
        0.0
    } else {
        v.get(i as usize).copied().unwrap_or(0.0)
    }
}

/// Coefficient of `t^m` in the cleared radial equation.
fn radial_coeff(a: &[f64], b: &[f64], p: &SeriesParams, m: usize) -> f64 {
    let m = m as isize;
    let n1 = p.n as f64 - 1.0;
    let h3 = (m + 2) as f64 * (m + 1) as f64 * at(a, m + 2);
    let mut conv = 0.0;
    for i in 0..=m {
        // f″ coefficient i times h′ coefficient m − i
        conv += (i + 1) as f64 * at(b, i + 1) * at(a, m - i);
    }
    -n1 * h3 + conv + p.c * at(a, m)
}

/// Coefficient of `t^m` in the cleared orthogonal equation.
fn orthogonal_coeff(a: &[f64], b: &[f64], p: &SeriesParams, m: usize) -> f64 {
    let m = m as isize;
    let n2 = p.n as f64 - 2.0;
    let h2 = |i: isize| (i + 1) as f64 * at(a, i + 1);
    let h3 = |i: isize| (i + 2) as f64 * (i + 1) as f64 * at(a, i + 2);
    let mut total = 0.0;
    for i in 0..=m {
        total += n2 * h2(i) * h2(m - i);
        total += at(a, i) * h3(m - i);
        total -= p.c * at(a, i) * at(a, m - i);
        for j in 0..=(m - i) {
            total -= at(b, i) * at(a, j) * h2(m - i - j);
        }
    }
    if m == 0 {
        total -= p.lambda_star;
    }
    total
}

/// Determines the series coefficients up to order `order`.
pub fn series_recursion(params: &SeriesParams, order: usize) -> Result<SeriesState> {
    if params.a0 != 0.0 || params.b0 != 0.0 {
        return Err(Error::Unsupported(
            "series recursion requires the odd ansatz (a₀ = b₀ = 0)".into(),
        ));
    }
    if params.n < 2 {
        return Err(Error::InvalidParams(format!("dimension n = {}", params.n)));
    }
    if ![params.c, params.lambda_star, params.a1, params.b1]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(Error::InvalidParams("non-finite series parameter".into()));
    }
    if order < 1 {
        return Err(Error::InvalidParams("series order must be at least 1".into()));
    }
    if params.a1 == 0.0 {
        return Err(Error::SeriesSingular {
            order: 1,
            determinant: 0.0,
        });
    }

    let len = order + 3;
    let mut a = vec![0.0; len];
    let mut b = vec![0.0; len];
    a[1] = params.a1;
    b[1] = params.b1;

    let tol = |scale: f64| 1e-9 * scale.max(1.0);

    let d0 = orthogonal_coeff(&a, &b, params, 0);
    let scale0 = (params.n as f64 - 2.0).abs() * params.a1 * params.a1 + params.lambda_star.abs();
    if d0.abs() > tol(scale0) {
        return Err(Error::SeriesInconsistent {
            order: 0,
            defect: d0,
        });
    }

    let mut k = 1;
    while k <= order {
        let ai = k + 2;
        if k == 1 {
            a[ai] = 0.0;
            let r0 = radial_coeff(&a, &b, params, k);
            a[ai] = 1.0;
            let slope = radial_coeff(&a, &b, params, k) - r0;
            a[ai] = -r0 / slope;
            let defect = orthogonal_coeff(&a, &b, params, k + 1);
            let scale = a.iter().chain(b.iter()).fold(0.0_f64, |m, v| m.max(v.abs()));
            if defect.abs() > tol(scale * scale * scale) {
                return Err(Error::SeriesInconsistent {
                    order: k + 1,
                    defect,
                });
            }
        } else {
            a[ai] = 0.0;
            b[k] = 0.0;
            let r0 = [
                radial_coeff(&a, &b, params, k),
                orthogonal_coeff(&a, &b, params, k + 1),
            ];
            a[ai] = 1.0;
            let ra = [
                radial_coeff(&a, &b, params, k) - r0[0],
                orthogonal_coeff(&a, &b, params, k + 1) - r0[1],
            ];
            a[ai] = 0.0;
            b[k] = 1.0;
            let rb = [
                radial_coeff(&a, &b, params, k) - r0[0],
                orthogonal_coeff(&a, &b, params, k + 1) - r0[1],
            ];
            let det = ra[0] * rb[1] - ra[1] * rb[0];
            let mag = (ra[0] * rb[1]).abs().max((ra[1] * rb[0]).abs());
            if det.abs() <= 1e-12 * mag || det == 0.0 {
                return Err(Error::SeriesSingular {
                    order: k,
                    determinant: det,
                });
            }
            // [ra rb] (x, y)ᵀ = −r0
            a[ai] = (-r0[0] * rb[1] + r0[1] * rb[0]) / det;
            b[k] = (-r0[1] * ra[0] + r0[0] * ra[1]) / det;
        }
        k += 2;
    }

    a.truncate(order + 1);
    b.truncate(order + 1);
    Ok(SeriesState {
        coeffs_a: a,
        coeffs_b: b,
        order,
        params: *params,
    })
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * t + x)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &x)| i as f64 * x)
        .collect()
}

impl SeriesState {
    /// Truncated `h′(t)`.
    pub fn warp(&self, t: f64) -> f64 {
        horner(&self.coeffs_a, t)
    }

    /// Truncated `f′(t)`.
    pub fn potential(&self, t: f64) -> f64 {
        horner(&self.coeffs_b, t)
    }

    /// Cleared radial equation evaluated on the truncated polynomials.
    pub fn radial_residual(&self, t: f64) -> f64 {
        let h1 = self.warp(t);
        let h3 = horner(&derivative(&derivative(&self.coeffs_a)), t);
        let f2 = horner(&derivative(&self.coeffs_b), t);
        -(self.params.n as f64 - 1.0) * h3 + f2 * h1 + self.params.c * h1
    }

    /// Cleared orthogonal equation evaluated on the truncated polynomials.
    pub fn orthogonal_residual(&self, t: f64) -> f64 {
        let p = &self.params;
        let h1 = self.warp(t);
        let d1 = derivative(&self.coeffs_a);
        let h2 = horner(&d1, t);
        let h3 = horner(&derivative(&d1), t);
        let f1 = self.potential(t);
        (p.n as f64 - 2.0) * h2 * h2 + h1 * h3 - f1 * h1 * h2 - p.c * h1 * h1 - p.lambda_star
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["order", "a", "b"])?;
        for (i, (a, b)) in self.coeffs_a.iter().zip(&self.coeffs_b).enumerate() {
            out.write_record([i.to_string(), a.to_string(), b.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_only() {
        let s = series_recursion(&SeriesParams::odd(3, -1.0, 1.0, 1.0, 1.0), 1).unwrap();
        assert_eq!(s.coeffs_a, vec![0.0, 1.0]);
        assert_eq!(s.coeffs_b, vec![0.0, 1.0]);
    }

    #[test]
    fn gaussian_terminates_after_linear_term() {
        for n in 3..7 {
            let s = series_recursion(&SeriesParams::odd(n, -1.0, (n - 2) as f64, 1.0, 1.0), 9).unwrap();
            for i in 2..=9 {
                assert!(s.coeffs_a[i].abs() <= 1e-12, "a_{i} = {}", s.coeffs_a[i]);
                assert!(s.coeffs_b[i].abs() <= 1e-12, "b_{i} = {}", s.coeffs_b[i]);
            }
        }
    }

    #[test]
    fn cigar_potential_series_is_minus_twice_warp_series() {
        let s = series_recursion(&SeriesParams::odd(2, 0.0, 0.0, 1.0, -2.0), 15).unwrap();
        for (a, b) in s.coeffs_a.iter().zip(&s.coeffs_b) {
            assert!((b + 2.0 * a).abs() < 1e-12);
        }
    }

    #[test]
    fn origin_consistency_is_enforced() {
        // λ* must equal (n−2) a₁².
        let err = series_recursion(&SeriesParams::odd(3, -1.0, 2.0, 1.0, 1.0), 5).unwrap_err();
        assert!(matches!(err, Error::SeriesInconsistent { order: 0, .. }));
    }

    #[test]
    fn non_odd_ansatz_is_rejected() {
        let mut p = SeriesParams::odd(3, -1.0, 1.0, 1.0, 1.0);
        p.a0 = 0.5;
        assert!(matches!(series_recursion(&p, 5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn parity_of_residual_coefficients() {
        let p = SeriesParams::odd(4, 0.3, 2.0, 1.0, 0.7);
        let s = series_recursion(&p, 11).unwrap();
        for m in (0..10).step_by(2) {
            assert!(radial_coeff(&s.coeffs_a, &s.coeffs_b, &p, m).abs() < 1e-14);
        }
        for m in (1..10).step_by(2) {
            assert!(orthogonal_coeff(&s.coeffs_a, &s.coeffs_b, &p, m).abs() < 1e-14);
        }
    }
}
