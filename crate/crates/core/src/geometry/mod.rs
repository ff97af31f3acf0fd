//! Curvature of the warped product `ds² = dt² + h′(t)² ds*²`.
//!
//! Everything here is a pure function of a [`WarpProfile`], a
//! [`Potential`] and the [`SolitonParams`]. The closed-form reductions are
//! cross-checked by [`oracle_ricci`], which never touches `h″` or `h‴`.

mod oracle;
mod profile;

pub use oracle::{oracle_ricci, oracle_ricci_at, FibreModel, OracleRicci};
pub use profile::{
    Interval, Potential, PotentialJet, PotentialSource, Provenance, ScalarFn, SolitonParams,
    WarpJet, WarpProfile, DEFAULT_FD_STEP, ZERO_WARP_EPS,
};

use crate::error::Result;

/// `Ric(∂t, ∂t) = −(n−1) h‴/h′`.
pub fn ricci_tt(h: &WarpProfile, p: &SolitonParams, t: f64) -> Result<f64> {
    let j = h.jet(t)?;
    Ok(tangential_from_jet(&j, p))
}

/// `Ric(X, X)` for a `g`-unit vector `X ⟂ ∂t`:
/// `[λ* − (n−2) h″² − h′ h‴] / h′²`.
pub fn ricci_orthogonal(h: &WarpProfile, p: &SolitonParams, t: f64) -> Result<f64> {
    let j = h.jet(t)?;
    Ok(orthogonal_from_jet(&j, p))
}

/// Scalar curvature, the trace `Ric(∂t,∂t) + (n−1) Ric(X,X)`.
pub fn scalar_curvature(h: &WarpProfile, p: &SolitonParams, t: f64) -> Result<f64> {
    let j = h.jet(t)?;
    Ok(scalar_from_jet(&j, p))
}

/// Eigenvalues of `∇²f`: `f″` along `∂t` and `f′ h″/h′` on the fibre.
pub fn hessian_components(f: &Potential, h: &WarpProfile, t: f64) -> Result<(f64, f64)> {
    let j = h.jet(t)?;
    let fj = f.jet(t)?;
    Ok((fj.second, fj.first * j.d1 / j.warp))
}

/// `Δf = f″ + (n−1) f′ h″/h′`.
pub fn laplacian_f(f: &Potential, h: &WarpProfile, p: &SolitonParams, t: f64) -> Result<f64> {
    let (radial, fibre) = hessian_components(f, h, t)?;
    Ok(radial + (p.dim() - 1.0) * fibre)
}

pub(crate) fn tangential_from_jet(j: &WarpJet, p: &SolitonParams) -> f64 {
    -(p.dim() - 1.0) * j.d2 / j.warp
}

pub(crate) fn orthogonal_from_jet(j: &WarpJet, p: &SolitonParams) -> f64 {
    (p.lambda_star - (p.dim() - 2.0) * j.d1 * j.d1 - j.warp * j.d2) / (j.warp * j.warp)
}

pub(crate) fn scalar_from_jet(j: &WarpJet, p: &SolitonParams) -> f64 {
    tangential_from_jet(j, p) + (p.dim() - 1.0) * orthogonal_from_jet(j, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn linear() -> WarpProfile {
        WarpProfile::new("t", Interval::POSITIVE, |t| t, |_| 1.0, |_| 0.0)
    }

    fn constant(k: f64) -> WarpProfile {
        WarpProfile::new("const", Interval::REAL_LINE, move |_| k, |_| 0.0, |_| 0.0)
    }

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
    fn linear_profile_has_no_radial_curvature() {
        for n in 2..6 {
            let p = SolitonParams::ricci(n, (n - 2) as f64).unwrap();
            assert_eq!(ricci_tt(&linear(), &p, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn cigar_gaussian_curvature() {
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        let t = 1.0_f64;
        let sech2 = 1.0 / t.cosh().powi(2);
        let k = ricci_tt(&tanh(), &p, t).unwrap();
        assert!((k - 2.0 * sech2).abs() < 1e-15);
        // K = 2h″ for the cigar.
        assert!((k - 2.0 * tanh().d1(t)).abs() < 1e-15);
        assert!((ricci_orthogonal(&tanh(), &p, t).unwrap() - k).abs() < 1e-15);
    }

    #[test]
    fn cigar_origin_is_a_reported_singularity() {
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        assert_eq!(ricci_tt(&tanh(), &p, 0.0), Err(Error::ZeroWarp { t: 0.0 }));
        // The limit value 2 (and S → 4) is approached off the origin.
        let near = ricci_tt(&tanh(), &p, 1e-6).unwrap();
        assert!((near - 2.0).abs() < 1e-10);
        let s = scalar_curvature(&tanh(), &p, 1e-6).unwrap();
        assert!((s - 4.0).abs() < 1e-10);
    }

    #[test]
    fn polar_euclidean_space_is_flat() {
        let p = SolitonParams::ricci(3, 1.0).unwrap();
        assert_eq!(ricci_orthogonal(&linear(), &p, 2.0).unwrap(), 0.0);
        for &t in &[0.1, 1.0, 7.5] {
            assert_eq!(scalar_curvature(&linear(), &p, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn products_with_einstein_fibres() {
        let flat = SolitonParams::ricci(3, 0.0).unwrap();
        for &t in &[-3.0, 0.0, 4.0] {
            assert_eq!(ricci_orthogonal(&constant(2.5), &flat, t).unwrap(), 0.0);
        }
        let sphere = SolitonParams::ricci(4, 2.0).unwrap();
        let k = 1.7;
        let s = scalar_curvature(&constant(k), &sphere, 0.3).unwrap();
        assert!((s - 3.0 * 2.0 / (k * k)).abs() < 1e-14);
    }

    #[test]
    fn hessian_and_laplacian() {
        let h = linear();
        let p = SolitonParams::ricci(3, 1.0).unwrap();
        let f = Potential::closed_form(|t| t, |_| 1.0);
        assert_eq!(hessian_components(&f, &h, 2.0).unwrap(), (1.0, 1.0));
        assert_eq!(laplacian_f(&f, &h, &p, 2.0).unwrap(), 3.0);
        let zero = Potential::zero();
        assert_eq!(hessian_components(&zero, &h, 2.0).unwrap(), (0.0, 0.0));
        assert_eq!(laplacian_f(&zero, &h, &p, 2.0).unwrap(), 0.0);

        let g = Potential::conformal(&tanh(), -2.0);
        let (r, o) = hessian_components(&g, &tanh(), 0.8).unwrap();
        assert!((r - o).abs() < 1e-15);
        assert!((r + 2.0 * tanh().d1(0.8)).abs() < 1e-15);
    }

    #[test]
    fn harmonic_potential_of_power_law() {
        // f′ = C (h′)^{1−n} is harmonic for any warp.
        let n = 4;
        let h = WarpProfile::new(
            "cosh",
            Interval::REAL_LINE,
            f64::cosh,
            f64::sinh,
            f64::cosh,
        );
        let c = 0.7;
        let f = Potential::closed_form(
            move |t: f64| c * t.cosh().powi(1 - n as i32),
            move |t: f64| c * (1.0 - n as f64) * t.cosh().powi(-(n as i32)) * t.sinh(),
        );
        let p = SolitonParams::ricci(n, 0.0).unwrap();
        for &t in &[-2.0, 0.0, 0.5, 3.0] {
            assert!(laplacian_f(&f, &h, &p, t).unwrap().abs() < 1e-14);
        }
    }
}
