//! Steady Ricci-Bourguignon solitons (traceless Ricci, `λ = 0`) with a
//! Ricci-flat fibre.
//!
//! With `u = h′` the two soliton equations reduce to `Δf = 0`, i.e.
//! `f′ = C u^{1−n}`, and the first-order equation
//! `u′ = B u^{2−n} + D u` with `B = nC/((n−1)(n−2))`. Its solution with
//! `u(0) = E` is
//!
//! ```text
//! u^{n−1} = E^{n−1} e^{(n−1)Dt} + B (e^{(n−1)Dt} − 1)/D     (D ≠ 0)
//! u^{n−1} = B (n−1) t + E^{n−1}                            (D = 0)
//! ```
//!
//! The `D ≠ 0` radicand is evaluated with `expm1`, so it tends smoothly to
//! the `D = 0` form.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Interval, Potential, SolitonParams, WarpProfile};
use crate::numerics::{integrate_ode, OdeSpec, Trajectory};

/// Constants `(n, B, C, D, E)` of the steady family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RBFamilyParams {
    pub n: usize,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// `h′(0)`.
    pub e: f64,
}

impl RBFamilyParams {
    pub fn new(n: usize, c: f64, d: f64, e: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!(
                "steady family needs n ≥ 3, got {n}"
            )));
        }
        let nf = n as f64;
        Self {
            n,
            b: nf * c / ((nf - 1.0) * (nf - 2.0)),
            c,
            d,
            e,
        }
        .validated()
    }

    /// Parameters from `B` instead of `C`.
    pub fn from_b(n: usize, b: f64, d: f64, e: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!(
                "steady family needs n ≥ 3, got {n}"
            )));
        }
        let nf = n as f64;
        Self {
            n,
            b,
            c: b * (nf - 1.0) * (nf - 2.0) / nf,
            d,
            e,
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        if ![self.b, self.c, self.d, self.e].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams("non-finite family constant".into()));
        }
        if self.c <= 0.0 {
            return Err(Error::InvalidParams(format!("C = {} must be positive", self.c)));
        }
        if self.e <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "E = h′(0) = {} must be positive",
                self.e
            )));
        }
        Ok(self)
    }

    fn exponent(&self) -> f64 {
        self.n as f64 - 1.0
    }

    /// `E^{n−1} + B/D`, the coefficient of `e^{(n−1)Dt}` (`D ≠ 0`).
    fn growth(&self) -> f64 {
        self.e.powf(self.exponent()) + self.b / self.d
    }

    pub fn soliton_params(&self) -> SolitonParams {
        SolitonParams {
            n: self.n,
            a: 1.0,
            b: 1.0,
            lambda_star: 0.0,
        }
    }
}

/// `h′^{n−1}` as a function of `t`.
pub fn rb_radicand(rb: &RBFamilyParams, t: f64) -> f64 {
    let m = rb.exponent();
    let em = rb.e.powf(m);
    if rb.d == 0.0 {
        return rb.b * m * t + em;
    }
    let x = m * rb.d * t;
    em * x.exp() + rb.b * x.exp_m1() / rb.d
}

/// `h′(t)`; errors where the radicand is not positive.
pub fn rb_profile(rb: &RBFamilyParams, t: f64) -> Result<f64> {
    let m = rb.exponent();
    if rb.d != 0.0 {
        let x = m * rb.d * t;
        if x > 700.0 {
            let a = rb.growth();
            if a > 0.0 {
                // e^x overflows; B/D is negligible against A e^x here.
                return Ok(((a.ln() + x) / m).exp());
            }
            if a == 0.0 {
                return Ok((-rb.b / rb.d).powf(1.0 / m));
            }
            return Err(Error::OutOfDomain {
                t,
                domain: rb_domain(rb),
            });
        }
    }
    let r = rb_radicand(rb, t);
    if r > 0.0 && r.is_finite() {
        Ok(r.powf(1.0 / m))
    } else if r == 0.0 {
        Err(Error::ZeroWarp { t })
    } else {
        Err(Error::OutOfDomain {
            t,
            domain: rb_domain(rb),
        })
    }
}

/// `f′(t) = C h′(t)^{1−n}`.
pub fn rb_potential(rb: &RBFamilyParams, t: f64) -> Result<f64> {
    let u = rb_profile(rb, t)?;
    Ok(rb.c * u.powf(1.0 - rb.n as f64))
}

/// Zero of the radicand, if it has one.
pub fn rb_zero(rb: &RBFamilyParams) -> Option<f64> {
    let m = rb.exponent();
    if rb.d == 0.0 {
        return Some(-rb.e.powf(m) / (rb.b * m));
    }
    let ratio = rb.b / (rb.d * rb.growth());
    (ratio > 0.0 && ratio.is_finite()).then(|| ratio.ln() / (m * rb.d))
}

/// Maximal open interval containing `t = 0` on which `h′ > 0`.
///
/// The radicand is positive for large `t` in every branch, so a zero
/// always bounds the domain from below.
pub fn rb_domain(rb: &RBFamilyParams) -> Interval {
    match rb_zero(rb) {
        None => Interval::REAL_LINE,
        Some(z) => Interval {
            lo: z,
            hi: f64::INFINITY,
        },
    }
}

/// Relative width of the band around `E^{n−1} = −B/D` treated as the
/// constant-warp boundary.
pub const BOUNDARY_REL_TOL: f64 = 1e-12;

fn on_boundary(rb: &RBFamilyParams) -> bool {
    let threshold = -rb.b / rb.d;
    rb.d < 0.0 && (rb.e.powf(rb.exponent()) - threshold).abs() <= BOUNDARY_REL_TOL * threshold
}

/// `D < 0` and `E^{n−1} > −B/D`, with the boundary band counted as
/// incomplete.
pub fn rb_is_complete(rb: &RBFamilyParams) -> bool {
    rb.d < 0.0 && rb.e.powf(rb.exponent()) > -rb.b / rb.d && !on_boundary(rb)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RbVerdict {
    pub complete: bool,
    /// `E^{n−1} = −B/D`: `h′` is constant.
    pub constant_warp: bool,
    /// Zero `t₀` of `h′`, if any.
    pub zero: Option<f64>,
    pub violated: Option<String>,
}

impl fmt::Display for RbVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.complete {
            return write!(f, "complete");
        }
        if self.constant_warp {
            return write!(f, "incomplete: constant h′ (E^(n−1) = −B/D)");
        }
        match (self.zero, &self.violated) {
            (Some(z), _) => write!(f, "incomplete: h′ vanishes at t₀ = {z}"),
            (None, Some(v)) => write!(f, "incomplete: {v}"),
            (None, None) => write!(f, "incomplete"),
        }
    }
}

/// Completeness verdict with the violated constraint and the zero of `h′`.
pub fn rb_classify(rb: &RBFamilyParams) -> RbVerdict {
    let complete = rb_is_complete(rb);
    let em = rb.e.powf(rb.exponent());
    let constant_warp = on_boundary(rb);
    let violated = if complete {
        None
    } else if rb.d == 0.0 {
        Some("D = 0 (need D < 0)".to_string())
    } else if rb.d > 0.0 {
        Some(format!("D = {} > 0 (need D < 0)", rb.d))
    } else if constant_warp {
        Some("E^(n−1) = −B/D".to_string())
    } else {
        Some(format!("E^(n−1) = {em} < −B/D = {}", -rb.b / rb.d))
    };
    RbVerdict {
        complete,
        constant_warp,
        zero: if complete || constant_warp { None } else { rb_zero(rb) },
        violated,
    }
}

/// Warp profile with exact `h″ = B u^{2−n} + D u` and
/// `h‴ = (B(2−n) u^{1−n} + D) h″`.
pub fn rb_warp_profile(rb: &RBFamilyParams) -> WarpProfile {
    let (p1, p2, p3) = (*rb, *rb, *rb);
    let n = rb.n as f64;
    let d1 = move |u: f64| p2.b * u.powf(2.0 - n) + p2.d * u;
    WarpProfile::new(
        "rb-steady",
        rb_domain(rb),
        move |t| rb_profile(&p1, t).unwrap_or(f64::NAN),
        move |t| rb_profile(&p2, t).map(d1).unwrap_or(f64::NAN),
        move |t| match rb_profile(&p3, t) {
            Ok(u) => (p3.b * (2.0 - n) * u.powf(1.0 - n) + p3.d) * d1(u),
            Err(_) => f64::NAN,
        },
    )
}

/// `f′ = C h′^{1−n}` with `f″ = C(1−n) h′^{−n} h″`.
pub fn rb_potential_fn(rb: &RBFamilyParams) -> Potential {
    let (p1, p2) = (*rb, *rb);
    let n = rb.n as f64;
    Potential::closed_form(
        move |t| rb_potential(&p1, t).unwrap_or(f64::NAN),
        move |t| match rb_profile(&p2, t) {
            Ok(u) => p2.c * (1.0 - n) * u.powf(-n) * (p2.b * u.powf(2.0 - n) + p2.d * u),
            Err(_) => f64::NAN,
        },
    )
    .with_constant("B", rb.b)
    .with_constant("C", rb.c)
    .with_constant("D", rb.d)
    .with_constant("E", rb.e)
}

/// Residuals of the two steady equations at `t`: the master equation with
/// `a = b = 1, λ* = 0` and `Δf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RbResidual {
    pub master: f64,
    pub laplacian: f64,
}

pub fn rb_steady_residual(rb: &RBFamilyParams, t: f64) -> Result<RbResidual> {
    let h = rb_warp_profile(rb);
    let f = rb_potential_fn(rb);
    let p = rb.soliton_params();
    let j = h.jet(t)?;
    let fj = f.jet(t)?;
    Ok(RbResidual {
        master: crate::synthesis::master_residual(&j, &fj, &p),
        laplacian: crate::geometry::laplacian_f(&f, &h, &p, t)?,
    })
}

/// ODE form `u′ = B u^{2−n} + D u`, `u(0) = E`.
pub fn rb_ode(rb: &RBFamilyParams) -> OdeSpec {
    let (b, d, n) = (rb.b, rb.d, rb.n as f64);
    OdeSpec::new(move |_, u| b * u.powf(2.0 - n) + d * u, 0.0, rb.e).positive()
}

pub fn rb_integrate(rb: &RBFamilyParams, t_end: f64, abs_tol: f64, rel_tol: f64) -> Result<Trajectory> {
    integrate_ode(&rb_ode(rb).tolerances(abs_tol, rel_tol), t_end)
}

/// Errors of the `D ≠ 0` profile against the `D = 0` closed form at `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DLimitRecord {
    pub t: f64,
    pub reference: f64,
    pub d_values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Errors strictly decrease along the sequence (or are all zero).
    pub monotone: bool,
}

pub fn rb_limit_d_to_zero(b: f64, e: f64, n: usize, t: f64, d_values: &[f64]) -> Result<DLimitRecord> {
    let reference = rb_profile(&RBFamilyParams::from_b(n, b, 0.0, e)?, t)?;
    let errors = d_values
        .iter()
        .map(|&d| Ok((rb_profile(&RBFamilyParams::from_b(n, b, d, e)?, t)? - reference).abs()))
        .collect::<Result<Vec<_>>>()?;
    let monotone = errors.iter().all(|&x| x == 0.0) || errors.windows(2).all(|w| w[1] < w[0]);
    Ok(DLimitRecord {
        t,
        reference,
        d_values: d_values.to_vec(),
        errors,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> RBFamilyParams {
        RBFamilyParams::new(3, 1.0, -1.0, 2.0).unwrap()
    }

    #[test]
    fn b_from_c() {
        let rb = reference();
        assert_eq!(rb.b, 1.5);
        let back = RBFamilyParams::from_b(3, 1.5, -1.0, 2.0).unwrap();
        assert!((back.c - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_values() {
        let rb = reference();
        for &t in &[-1.0_f64, 0.0, 0.7, 3.0] {
            let expect = (2.5 * (-2.0 * t).exp() + 1.5_f64).sqrt();
            assert!((rb_profile(&rb, t).unwrap() - expect).abs() < 1e-14);
        }
        assert_eq!(rb_profile(&rb, 0.0).unwrap(), 2.0);
        assert!((rb_profile(&rb, 40.0).unwrap() - 1.5_f64.sqrt()).abs() < 1e-14);
        assert_eq!(rb_potential(&rb, 0.0).unwrap(), 0.25);
        assert!((rb_potential(&rb, 40.0).unwrap() - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_ode() {
        let rb = reference();
        let h = rb_warp_profile(&rb);
        assert!((h.d1(0.0) + 1.25).abs() < 1e-14);
        let s = 1e-5;
        for &t in &[-0.5, 0.4, 2.0] {
            let fd2 = (h.d1(t + s) - h.d1(t - s)) / (2.0 * s);
            assert!((h.d2(t) - fd2).abs() < 1e-8);
        }
    }

    #[test]
    fn d_zero_branch() {
        let rb = RBFamilyParams::new(3, 1.0, 0.0, 1.0).unwrap();
        assert!((rb_profile(&rb, 1.0).unwrap() - 2.0).abs() < 1e-15);
        let z = rb_zero(&rb).unwrap();
        assert!((z + 1.0 / 3.0).abs() < 1e-15);
        assert!(rb_profile(&rb, -0.5).is_err());
        let near = rb_potential(&rb, z + 1e-9).unwrap();
        assert!(near > 1e8);
        let v = rb_classify(&rb);
        assert!(!v.complete);
        assert!(v.to_string().starts_with("incomplete: h′ vanishes at t₀ = -0.333"));
    }

    #[test]
    fn completeness_cases() {
        assert!(rb_is_complete(&reference()));
        assert!(!rb_is_complete(&RBFamilyParams::new(3, 1.0, 0.0, 1.0).unwrap()));
        assert!(!rb_is_complete(&RBFamilyParams::new(3, 1.0, 0.5, 1.0).unwrap()));
        let boundary = RBFamilyParams::new(3, 1.0, -1.0, 1.5_f64.sqrt()).unwrap();
        let v = rb_classify(&boundary);
        assert!(!v.complete);
        assert!(v.constant_warp);
        assert_eq!(v.to_string(), "incomplete: constant h′ (E^(n−1) = −B/D)");
        let short = RBFamilyParams::new(3, 1.0, -1.0, 1.0).unwrap();
        let v = rb_classify(&short);
        assert!(!v.complete);
        let z = v.zero.unwrap();
        assert!(z < 0.0);
        assert!(rb_radicand(&short, z).abs() < 1e-12);
    }

    #[test]
    fn overflow_guard() {
        let rb = RBFamilyParams::new(4, 1.0, -2.0, 1.5).unwrap();
        let u = rb_profile(&rb, -200.0).unwrap();
        assert!(u.is_finite() && u > 0.0);
    }

    #[test]
    fn steady_residuals_vanish() {
        let rb = RBFamilyParams::new(5, 2.0, -0.7, 1.3).unwrap();
        for &t in &[-3.0, 0.0, 1.0, 10.0] {
            let r = rb_steady_residual(&rb, t).unwrap();
            assert!(r.master.abs() < 1e-10, "{r:?}");
            assert!(r.laplacian.abs() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn limit_sequence() {
        let rec = rb_limit_d_to_zero(1.5, 1.0, 3, 0.5, &[-1e-1, -1e-2, -1e-3]).unwrap();
        assert!(rec.monotone, "{rec:?}");
        let at0 = rb_limit_d_to_zero(1.5, 1.0, 3, 0.0, &[-1e-1, -1e-2]).unwrap();
        assert_eq!(at0.errors, vec![0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(RBFamilyParams::new(2, 1.0, -1.0, 1.0).is_err());
        assert!(RBFamilyParams::new(3, -1.0, -1.0, 1.0).is_err());
        assert!(RBFamilyParams::new(3, 1.0, -1.0, 0.0).is_err());
    }
}
