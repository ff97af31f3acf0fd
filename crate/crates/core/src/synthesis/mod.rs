//! Potential synthesis for a prescribed warp profile and residuals of the
//! soliton equations.
//!
//! Eliminating `c` between the radial and orthogonal components of
//! `a Ric + b ∇²f + c g = 0` leaves the master equation
//!
//! ```text
//! a(n−2)[h″² − h′h‴] + b h′ [f″h′ − f′h″] = λ* a
//! ```
//!
//! whose `b`-bracket is `h′³ (f′/h′)′`. Hence
//! `f′ = h′ · [C + ∫_{t₀}^{t} (λ*a − a(n−2)(h″² − h′h‴)) / (b h′³) ds]`.
//! The integrand never divides by `h″`, so inflection points of `h` are
//! harmless.

mod report;

pub use report::{residual_report, Certification, MaxAbs, ResidualReport, ReportSummary};

use std::cell::RefCell;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    laplacian_f, scalar_curvature, Potential, PotentialJet, PotentialSource, Provenance,
    SolitonParams, WarpJet, WarpProfile, ZERO_WARP_EPS,
};
use crate::numerics::{linspace, quadrature, QuadratureOptions};

/// Default residual certification tolerance.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureMethod {
    /// Globally adaptive Gauss-Kronrod (7, 15).
    AdaptiveGaussKronrod,
}

/// Quadrature settings and the two integration constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Anchor `t₀` of both integrations.
    pub base_point: f64,
    /// Value of `f′/h′` at `t₀`.
    pub const_inner: f64,
    /// Value of `f` at `t₀`.
    pub const_outer: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::AdaptiveGaussKronrod,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            base_point: 0.0,
            const_inner: 0.0,
            const_outer: 0.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self, h: &WarpProfile) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParams("quadrature tolerances must be positive".into()));
        }
        if !(self.const_inner.is_finite() && self.const_outer.is_finite()) {
            return Err(Error::InvalidParams("non-finite integration constant".into()));
        }
        h.check_domain(self.base_point)
    }

    fn options(&self) -> QuadratureOptions {
        QuadratureOptions {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            ..Default::default()
        }
    }
}

/// `(λ*a − a(n−2)(h″² − h′h‴)) / (b h′³)`, the derivative of `f′/h′`.
fn master_integrand(j: &WarpJet, p: &SolitonParams) -> f64 {
    let n2 = p.dim() - 2.0;
    (p.lambda_star * p.a - p.a * n2 * (j.d1 * j.d1 - j.warp * j.d2)) / (p.b * j.warp.powi(3))
}

struct SynthesizedPotential {
    profile: WarpProfile,
    params: SolitonParams,
    spec: QuadratureSpec,
    base_sign: f64,
}

impl SynthesizedPotential {
    /// `f′/h′` at `t`.
    fn bracket(&self, t: f64) -> Result<f64> {
        let profile = &self.profile;
        let params = &self.params;
        let integrand = |s: f64| match profile.jet(s) {
            Ok(j) => master_integrand(&j, params),
            Err(_) => f64::NAN,
        };
        let r = quadrature(integrand, self.spec.base_point, t, &self.spec.options())?;
        Ok(self.spec.const_inner + r.value)
    }
}

impl PotentialSource for SynthesizedPotential {
    fn jet(&self, t: f64) -> Result<PotentialJet> {
        let j = self.profile.jet(t)?;
        if j.warp.signum() != self.base_sign {
            // A sign change between t₀ and t means a zero of h′ in between.
            return Err(Error::ZeroWarp { t });
        }
        let bracket = self.bracket(t).map_err(|e| match e {
            Error::NonFinite { t, .. } => Error::ZeroWarp { t },
            other => other,
        })?;
        Ok(PotentialJet {
            first: j.warp * bracket,
            second: j.d1 * bracket + j.warp * master_integrand(&j, &self.params),
        })
    }
}

/// Builds `f′` for the given profile by quadrature of the master equation.
///
/// `f″` is assembled from the integrand itself, never by differentiating
/// the quadrature.
pub fn synthesize_potential(
    h: &WarpProfile,
    p: &SolitonParams,
    q: &QuadratureSpec,
) -> Result<Potential> {
    p.validate()?;
    if p.b == 0.0 {
        return Err(Error::InvalidParams(
            "b = 0 leaves no potential to synthesize (Einstein branch)".into(),
        ));
    }
    q.validate(h)?;
    let base = h.jet(q.base_point)?;
    let source = SynthesizedPotential {
        profile: h.clone(),
        params: *p,
        spec: *q,
        base_sign: base.warp.signum(),
    };
    Ok(Potential::from_source(Arc::new(source), Provenance::Quadrature)
        .with_constant("C", q.const_inner)
        .with_constant("D", q.const_outer)
        .with_constant("t0", q.base_point))
}

/// `f(t) = const_outer + ∫_{t₀}^{t} f′`, the optional second integration.
pub fn integrate_potential(f: &Potential, q: &QuadratureSpec, t: f64) -> Result<f64> {
    let failure = RefCell::new(None);
    let r = quadrature(
        |s| match f.eval(s) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        q.base_point,
        t,
        &q.options(),
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(q.const_outer + r?.value)
}

/// `c = −(a S + b Δf)/n`, the function making `a Ric + b ∇²f + c g`
/// trace-free.
pub fn induced_c(h: &WarpProfile, f: &Potential, p: &SolitonParams, t: f64) -> Result<f64> {
    let s = scalar_curvature(h, p, t)?;
    let lap = laplacian_f(f, h, p, t)?;
    Ok(-(p.a * s + p.b * lap) / p.dim())
}

/// Residuals of the three component equations at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResiduals {
    pub tangential: f64,
    pub orthogonal: f64,
    pub master: f64,
    pub c: f64,
}

/// Evaluates the radial, orthogonal and master residuals at `t`, with `c`
/// taken from [`induced_c`].
pub fn point_residuals(
    h: &WarpProfile,
    f: &Potential,
    p: &SolitonParams,
    t: f64,
) -> Result<PointResiduals> {
    let j = h.jet(t)?;
    let fj = f.jet(t)?;
    let c = induced_c(h, f, p, t)?;
    let n = p.dim();
    let (a, b, ls) = (p.a, p.b, p.lambda_star);
    let tangential = -(n - 1.0) * a * j.d2 / j.warp + b * fj.second + c;
    let orthogonal = a * (n - 2.0) * j.d1 * j.d1 + a * j.warp * j.d2
        - b * fj.first * j.warp * j.d1
        - c * j.warp * j.warp
        - ls * a;
    let master = master_residual(&j, &fj, p);
    Ok(PointResiduals {
        tangential,
        orthogonal,
        master,
        c,
    })
}

/// `a(n−2)[h″² − h′h‴] + b h′[f″h′ − f′h″] − λ* a`.
pub fn master_residual(j: &WarpJet, fj: &PotentialJet, p: &SolitonParams) -> f64 {
    p.a * (p.dim() - 2.0) * (j.d1 * j.d1 - j.warp * j.d2)
        + p.b * j.warp * (fj.second * j.warp - fj.first * j.d1)
        - p.lambda_star * p.a
}

/// Certifies `(a Ric + b ∇²f)° = 0` on `points` uniform samples of
/// `[lo, hi]`: passes iff the master residual stays within `tol`.
pub fn check_almost_soliton(
    h: &WarpProfile,
    f: &Potential,
    p: &SolitonParams,
    interval: (f64, f64),
    points: usize,
    tol: f64,
) -> Result<Certification> {
    let grid = linspace(interval.0, interval.1, points);
    let report = residual_report(h, f, p, &grid)?;
    Ok(Certification {
        passed: report.max_abs.master <= tol,
        tol,
        report,
    })
}

/// Checks the uncoupled `n = 2` system `f′ = γh′`,
/// `−a h‴ + b γ h′h″ + c h′ = 0` on a grid. Points at zeros of `h′` are
/// skipped.
pub fn check_n2_system(
    h: &WarpProfile,
    f: &Potential,
    p: &SolitonParams,
    gamma: f64,
    c: f64,
    grid: &[f64],
    tol: f64,
) -> Result<bool> {
    if p.n != 2 {
        return Err(Error::InvalidParams(format!(
            "the uncoupled system holds for n = 2, got n = {}",
            p.n
        )));
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &t in grid {
        let j = match h.jet(t) {
            Ok(j) => j,
            Err(Error::ZeroWarp { .. }) => continue,
            Err(e) => return Err(e),
        };
        let fj = f.jet(t)?;
        let proportional = (fj.first - gamma * j.warp).abs();
        let third_order = (-p.a * j.d2 + p.b * gamma * j.warp * j.d1 + c * j.warp).abs();
        if !(proportional <= tol && third_order <= tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Skips zero-warp grid points instead of failing; used by the report.
pub(crate) fn warp_is_zero(h: &WarpProfile, t: f64) -> bool {
    h.eval(t).abs() < ZERO_WARP_EPS
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Interval;
    use std::f64::consts::PI;

    fn arctan_profile() -> WarpProfile {
        WarpProfile::new(
            "arctan",
            Interval::REAL_LINE,
            |t| 1.0 / (t * t + 1.0),
            |t| -2.0 * t / (t * t + 1.0).powi(2),
            |t| (6.0 * t * t - 2.0) / (t * t + 1.0).powi(3),
        )
    }

    #[test]
    fn arctan_potential_at_one() {
        let p = SolitonParams::ricci(3, 0.0).unwrap();
        let f = synthesize_potential(&arctan_profile(), &p, &QuadratureSpec::default()).unwrap();
        let v = f.eval(1.0).unwrap();
        assert!((v - (2.0 - PI) / 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn einstein_profile_gives_conformal_field() {
        // sinh: h″² − h′h‴ = 1, so λ* = n − 2 kills the integrand.
        let h = WarpProfile::new("sinh", Interval::POSITIVE, f64::sinh, f64::cosh, f64::sinh);
        let p = SolitonParams::ricci(4, 2.0).unwrap();
        let q = QuadratureSpec {
            base_point: 1.0,
            const_inner: 0.75,
            ..Default::default()
        };
        let f = synthesize_potential(&h, &p, &q).unwrap();
        for &t in &[0.3, 1.0, 2.5] {
            let v = f.eval(t).unwrap();
            assert!((v - 0.75 * t.sinh()).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_warp_gives_affine_potential() {
        let h = WarpProfile::new("one", Interval::REAL_LINE, |_| 1.0, |_| 0.0, |_| 0.0);
        let p = SolitonParams::ricci(3, 0.0).unwrap();
        let q = QuadratureSpec {
            const_inner: 2.0,
            const_outer: -1.0,
            ..Default::default()
        };
        let f = synthesize_potential(&h, &p, &q).unwrap();
        assert_eq!(f.jet(3.0).unwrap(), PotentialJet { first: 2.0, second: 0.0 });
        assert!((integrate_potential(&f, &q, 3.0).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn einstein_branch_is_rejected() {
        let p = SolitonParams::new(3, 1.0, 0.0, 0.0).unwrap();
        let err = synthesize_potential(&arctan_profile(), &p, &QuadratureSpec::default());
        assert!(matches!(err, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn zero_inside_integration_range() {
        let h = WarpProfile::new("t", Interval::REAL_LINE, |t| t, |_| 1.0, |_| 0.0);
        let p = SolitonParams::ricci(3, 0.0).unwrap();
        let q = QuadratureSpec {
            base_point: 1.0,
            ..Default::default()
        };
        let f = synthesize_potential(&h, &p, &q).unwrap();
        assert!(matches!(f.eval(-1.0), Err(Error::ZeroWarp { .. })));
    }

    #[test]
    fn induced_c_for_known_solitons() {
        let tanh = WarpProfile::new(
            "tanh",
            Interval::REAL_LINE,
            f64::tanh,
            |t: f64| 1.0 / t.cosh().powi(2),
            |t: f64| -2.0 * t.tanh() / t.cosh().powi(2),
        );
        let cigar = Potential::conformal(&tanh, -2.0);
        let p2 = SolitonParams::ricci(2, 0.0).unwrap();
        let lin = WarpProfile::new("t", Interval::POSITIVE, |t| t, |_| 1.0, |_| 0.0);
        let gauss = Potential::closed_form(|t| t, |_| 1.0);
        let p3 = SolitonParams::ricci(3, 1.0).unwrap();
        for &t in &[0.2, 1.0, 3.0] {
            assert!(induced_c(&tanh, &cigar, &p2, t).unwrap().abs() < 1e-14);
            assert!((induced_c(&lin, &gauss, &p3, t).unwrap() + 1.0).abs() < 1e-14);
        }
        let one = WarpProfile::new("one", Interval::REAL_LINE, |_| 1.0, |_| 0.0, |_| 0.0);
        let flat = SolitonParams::ricci(3, 0.0).unwrap();
        assert_eq!(induced_c(&one, &Potential::zero(), &flat, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn n2_system_checks() {
        let tan = WarpProfile::new(
            "tan",
            Interval::new(-PI / 2.0, PI / 2.0).unwrap(),
            f64::tan,
            |t: f64| 1.0 / t.cos().powi(2),
            |t: f64| 2.0 * t.tan() / t.cos().powi(2),
        );
        let f = Potential::conformal(&tan, 2.0);
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        let grid = linspace(-1.2, 1.2, 101);
        assert!(check_n2_system(&tan, &f, &p, 2.0, 0.0, &grid, 1e-10).unwrap());
        assert!(!check_n2_system(&tan, &f, &p, -2.0, 0.0, &grid, 1e-10).unwrap());
        assert!(matches!(
            check_n2_system(&tan, &f, &p, 2.0, 0.0, &[], 1e-10),
            Err(Error::EmptyGrid)
        ));
    }
}
