use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Shared scalar callable `t ↦ value`.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// |h′| below this is treated as a zero of the warp factor.
pub const ZERO_WARP_EPS: f64 = 1e-12;

/// Default central-difference step for profiles without analytic derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub const POSITIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidParams(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    /// Intersection with a closed window, returned as a pair of finite ends.
    pub fn clamp_window(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        let a = lo.max(self.lo);
        let b = hi.min(self.hi);
        (a < b).then_some((a, b))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Warp factor `h′(t)` together with `h″` and `h‴`.
///
/// Catalog families supply exact derivatives. Arbitrary profiles built with
/// [`WarpProfile::from_fn`] fall back to central differences.
#[derive(Clone)]
pub struct WarpProfile {
    label: String,
    domain: Interval,
    eval: ScalarFn,
    d1: ScalarFn,
    d2: ScalarFn,
}

/// Values of `h′, h″, h‴` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpJet {
    pub warp: f64,
    pub d1: f64,
    pub d2: f64,
}

impl WarpProfile {
    pub fn new(
        label: impl Into<String>,
        domain: Interval,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            domain,
            eval: Arc::new(eval),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        }
    }

    /// Profile with derivatives taken by central differences.
    ///
    /// `h″` uses `step`; `h‴` is the second central difference of `h′` with
    /// step `max(step, 1e-4)`, which keeps the rounding floor near `1e-8`
    /// for unit-scale profiles. Both are `O(step²)`.
    pub fn from_fn(
        label: impl Into<String>,
        domain: Interval,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        step: f64,
    ) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParams(format!("finite-difference step {step}")));
        }
        let eval: ScalarFn = Arc::new(eval);
        let e1 = Arc::clone(&eval);
        let e2 = Arc::clone(&eval);
        let step2 = step.max(1e-4);
        Ok(Self {
            label: label.into(),
            domain,
            eval,
            d1: Arc::new(move |t| (e1(t + step) - e1(t - step)) / (2.0 * step)),
            d2: Arc::new(move |t| (e2(t + step2) - 2.0 * e2(t) + e2(t - step2)) / (step2 * step2)),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// `h′(t)`, unchecked.
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// `h″(t)`, unchecked.
    pub fn d1(&self, t: f64) -> f64 {
        (self.d1)(t)
    }

    /// `h‴(t)`, unchecked.
    pub fn d2(&self, t: f64) -> f64 {
        (self.d2)(t)
    }

    pub fn eval_fn(&self) -> ScalarFn {
        Arc::clone(&self.eval)
    }

    pub fn check_domain(&self, t: f64) -> Result<()> {
        if self.domain.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                t,
                domain: self.domain,
            })
        }
    }

    /// Checked jet: domain membership, finiteness and a nonzero warp.
    pub fn jet(&self, t: f64) -> Result<WarpJet> {
        self.check_domain(t)?;
        let jet = WarpJet {
            warp: self.eval(t),
            d1: self.d1(t),
            d2: self.d2(t),
        };
        if !(jet.warp.is_finite() && jet.d1.is_finite() && jet.d2.is_finite()) {
            return Err(Error::NonFinite {
                what: "warp profile",
                t,
            });
        }
        if jet.warp.abs() < ZERO_WARP_EPS {
            return Err(Error::ZeroWarp { t });
        }
        Ok(jet)
    }
}

impl fmt::Debug for WarpProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WarpProfile")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

/// Dimension and coefficients of `a Ric + b ∇²f + c g = 0`, plus the fibre
/// Einstein constant `λ*` (`Ric* = λ* g*`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolitonParams {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub lambda_star: f64,
}

impl SolitonParams {
    pub fn new(n: usize, a: f64, b: f64, lambda_star: f64) -> Result<Self> {
        let p = Self {
            n,
            a,
            b,
            lambda_star,
        };
        p.validate()?;
        Ok(p)
    }

    /// `a = b = 1`: the (almost) gradient Ricci soliton equation.
    pub fn ricci(n: usize, lambda_star: f64) -> Result<Self> {
        Self::new(n, 1.0, 1.0, lambda_star)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!("dimension n = {} < 2", self.n)));
        }
        if !(self.a.is_finite() && self.b.is_finite() && self.lambda_star.is_finite()) {
            return Err(Error::InvalidParams("non-finite coefficient".into()));
        }
        if self.n == 2 && self.lambda_star != 0.0 {
            return Err(Error::InvalidParams(
                "n = 2 has a one-dimensional fibre, λ* must be 0".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn dim(&self) -> f64 {
        self.n as f64
    }
}

/// Values of `f′` and `f″` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialJet {
    pub first: f64,
    pub second: f64,
}

/// Anything that can evaluate `f′` and `f″` of a radial potential.
pub trait PotentialSource: Send + Sync {
    fn jet(&self, t: f64) -> Result<PotentialJet>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Quadrature,
}

struct ClosedForm {
    eval: ScalarFn,
    d1: ScalarFn,
}

impl PotentialSource for ClosedForm {
    fn jet(&self, t: f64) -> Result<PotentialJet> {
        let jet = PotentialJet {
            first: (self.eval)(t),
            second: (self.d1)(t),
        };
        if jet.first.is_finite() && jet.second.is_finite() {
            Ok(jet)
        } else {
            Err(Error::NonFinite {
                what: "potential",
                t,
            })
        }
    }
}

struct Shifted {
    base: Arc<dyn PotentialSource>,
    eval: ScalarFn,
    d1: ScalarFn,
}

impl PotentialSource for Shifted {
    fn jet(&self, t: f64) -> Result<PotentialJet> {
        let base = self.base.jet(t)?;
        Ok(PotentialJet {
            first: base.first + (self.eval)(t),
            second: base.second + (self.d1)(t),
        })
    }
}

/// Radial potential `f(t)` through its derivatives `f′` and `f″`.
#[derive(Clone)]
pub struct Potential {
    source: Arc<dyn PotentialSource>,
    constants: BTreeMap<String, f64>,
    provenance: Provenance,
}

impl Potential {
    pub fn closed_form(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            source: Arc::new(ClosedForm {
                eval: Arc::new(eval),
                d1: Arc::new(d1),
            }),
            constants: BTreeMap::new(),
            provenance: Provenance::ClosedForm,
        }
    }

    pub fn from_source(source: Arc<dyn PotentialSource>, provenance: Provenance) -> Self {
        Self {
            source,
            constants: BTreeMap::new(),
            provenance,
        }
    }

    /// Constant `f`.
    pub fn zero() -> Self {
        Self::closed_form(|_| 0.0, |_| 0.0)
    }

    /// `f′ = γ h′`, a conformal gradient field.
    pub fn conformal(profile: &WarpProfile, gamma: f64) -> Self {
        let e = profile.eval_fn();
        let d = Arc::clone(&profile.d1);
        Self::closed_form(move |t| gamma * e(t), move |t| gamma * d(t))
            .with_constant("gamma", gamma)
    }

    pub fn with_constant(mut self, name: impl Into<String>, value: f64) -> Self {
        self.constants.insert(name.into(), value);
        self
    }

    /// Adds `δ′` (with derivative `δ″`) to `f′`.
    pub fn perturbed(
        &self,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            source: Arc::new(Shifted {
                base: Arc::clone(&self.source),
                eval: Arc::new(eval),
                d1: Arc::new(d1),
            }),
            constants: self.constants.clone(),
            provenance: self.provenance,
        }
    }

    pub fn jet(&self, t: f64) -> Result<PotentialJet> {
        self.source.jet(t)
    }

    /// `f′(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t)?.first)
    }

    /// `f″(t)`.
    pub fn d1(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t)?.second)
    }

    pub fn constants(&self) -> &BTreeMap<String, f64> {
        &self.constants
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("constants", &self.constants)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}
