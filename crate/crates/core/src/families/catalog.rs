use std::f64::consts::{FRAC_PI_2, PI};

use super::bourguignon::{rb_classify, rb_potential_fn, rb_warp_profile, RBFamilyParams};
use super::{Completeness, ExpectedC, FamilyEntry};
use crate::error::Result;
use crate::geometry::{Interval, Potential, SolitonParams, WarpProfile};
use crate::synthesis::{synthesize_potential, QuadratureSpec};

/// Einstein warp profiles with `h″² − h′h‴` constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EinsteinKind {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Linear,
}

impl EinsteinKind {
    pub const ALL: [EinsteinKind; 6] = [
        EinsteinKind::Sin,
        EinsteinKind::Cos,
        EinsteinKind::Sinh,
        EinsteinKind::Cosh,
        EinsteinKind::Exp,
        EinsteinKind::Linear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EinsteinKind::Sin => "einstein-sin",
            EinsteinKind::Cos => "einstein-cos",
            EinsteinKind::Sinh => "einstein-sinh",
            EinsteinKind::Cosh => "einstein-cosh",
            EinsteinKind::Exp => "einstein-exp",
            EinsteinKind::Linear => "einstein-linear",
        }
    }
}

/// `(n−2)[h″² − h′h‴] = λ*` with `a = 1`, `b = 0`; `c = −S/n` is constant.
pub fn einstein(kind: EinsteinKind, n: usize) -> Result<FamilyEntry> {
    let m = n as f64;
    let (profile, lambda_star, c, completeness, sample) = match kind {
        EinsteinKind::Sin => (
            WarpProfile::new("sin", Interval::new(0.0, PI)?, f64::sin, f64::cos, |t: f64| -t.sin()),
            m - 2.0,
            -(m - 1.0),
            Completeness::ClosingInterval { lo: 0.0, hi: PI },
            (0.1, 3.0),
        ),
        EinsteinKind::Cos => (
            WarpProfile::new(
                "cos",
                Interval::new(-FRAC_PI_2, FRAC_PI_2)?,
                f64::cos,
                |t: f64| -t.sin(),
                |t: f64| -t.cos(),
            ),
            m - 2.0,
            -(m - 1.0),
            Completeness::ClosingInterval {
                lo: -FRAC_PI_2,
                hi: FRAC_PI_2,
            },
            (-1.4, 1.4),
        ),
        EinsteinKind::Sinh => (
            WarpProfile::new("sinh", Interval::POSITIVE, f64::sinh, f64::cosh, f64::sinh),
            m - 2.0,
            m - 1.0,
            Completeness::ClosingHalfLine { origin: 0.0 },
            (0.1, 5.0),
        ),
        EinsteinKind::Cosh => (
            WarpProfile::new("cosh", Interval::REAL_LINE, f64::cosh, f64::sinh, f64::cosh),
            -(m - 2.0),
            m - 1.0,
            Completeness::WholeLine,
            (-5.0, 5.0),
        ),
        EinsteinKind::Exp => (
            WarpProfile::new("exp", Interval::REAL_LINE, f64::exp, f64::exp, f64::exp),
            0.0,
            m - 1.0,
            Completeness::WholeLine,
            (-5.0, 5.0),
        ),
        EinsteinKind::Linear => (
            WarpProfile::new("linear", Interval::POSITIVE, |t| t, |_| 1.0, |_| 0.0),
            m - 2.0,
            0.0,
            Completeness::ClosingHalfLine { origin: 0.0 },
            (0.1, 5.0),
        ),
    };
    Ok(FamilyEntry {
        name: kind.name().to_string(),
        profile,
        potential: Potential::zero(),
        params: SolitonParams::new(n, 1.0, 0.0, lambda_star)?,
        expected_c: ExpectedC::Constant(c),
        gamma: None,
        first_integral: None,
        completeness,
        sample,
        notes: "Einstein metric; the fibre must be Einstein with the stated λ* \
                (unit sphere for λ* = n − 2, hyperbolic for λ* < 0)."
            .into(),
    })
}

/// `h′ = f′ = t`: flat space with `f = t²/2`, `c = −1`.
pub fn gaussian(n: usize) -> Result<FamilyEntry> {
    Ok(FamilyEntry {
        name: "gaussian".into(),
        profile: WarpProfile::new("linear", Interval::POSITIVE, |t| t, |_| 1.0, |_| 0.0),
        potential: Potential::closed_form(|t| t, |_| 1.0),
        params: SolitonParams::ricci(n, n as f64 - 2.0)?,
        expected_c: ExpectedC::Constant(-1.0),
        gamma: None,
        first_integral: None,
        completeness: Completeness::ClosingHalfLine { origin: 0.0 },
        sample: (0.1, 5.0),
        notes: "Polar form of Euclidean space over the unit sphere; smooth at the origin \
                (not checked numerically, t = 0 is a chart singularity)."
            .into(),
    })
}

fn two_dimensional(
    name: &str,
    profile: WarpProfile,
    gamma: f64,
    first_integral: f64,
    completeness: Completeness,
    sample: (f64, f64),
    notes: &str,
) -> Result<FamilyEntry> {
    Ok(FamilyEntry {
        name: name.into(),
        potential: Potential::conformal(&profile, gamma),
        profile,
        params: SolitonParams::ricci(2, 0.0)?,
        expected_c: ExpectedC::Constant(0.0),
        gamma: Some(gamma),
        first_integral: Some(first_integral),
        completeness,
        sample,
        notes: notes.into(),
    })
}

/// `h′ = tanh t`, `f′ = −2 tanh t`: the cigar steady soliton.
pub fn cigar() -> Result<FamilyEntry> {
    two_dimensional(
        "cigar",
        WarpProfile::new(
            "tanh",
            Interval::REAL_LINE,
            f64::tanh,
            |t: f64| 1.0 / t.cosh().powi(2),
            |t: f64| -2.0 * t.tanh() / t.cosh().powi(2),
        ),
        -2.0,
        1.0,
        Completeness::ClosingHalfLine { origin: 0.0 },
        (0.1, 5.0),
        "Complete on ℝ² with a circle fibre; Cartesian form (dx² + dy²)/(1 + x² + y²).",
    )
}

/// `h′ = tan t`, `γ = 2`.
pub fn tan() -> Result<FamilyEntry> {
    two_dimensional(
        "tan",
        WarpProfile::new(
            "tan",
            Interval::new(-FRAC_PI_2, FRAC_PI_2)?,
            f64::tan,
            |t: f64| 1.0 / t.cos().powi(2),
            |t: f64| 2.0 * t.tan() / t.cos().powi(2),
        ),
        2.0,
        1.0,
        Completeness::Incomplete("h′ blows up at t = ±π/2".into()),
        (-1.4, 1.4),
        "Zero of h′ at t = 0 is excluded from residual grids.",
    )
}

/// `h′ = coth t`, `γ = −2`.
pub fn coth() -> Result<FamilyEntry> {
    two_dimensional(
        "coth",
        WarpProfile::new(
            "coth",
            Interval::POSITIVE,
            |t: f64| 1.0 / t.tanh(),
            |t: f64| -1.0 / t.sinh().powi(2),
            |t: f64| 2.0 * t.cosh() / t.sinh().powi(3),
        ),
        -2.0,
        1.0,
        Completeness::Incomplete("pole of h′ at t = 0".into()),
        (0.1, 5.0),
        "",
    )
}

/// `h′ = 1/t`, `γ = −2`.
pub fn reciprocal() -> Result<FamilyEntry> {
    two_dimensional(
        "reciprocal",
        WarpProfile::new(
            "reciprocal",
            Interval::POSITIVE,
            |t: f64| 1.0 / t,
            |t: f64| -1.0 / (t * t),
            |t: f64| 2.0 / (t * t * t),
        ),
        -2.0,
        0.0,
        Completeness::Incomplete("pole of h′ at t = 0".into()),
        (0.1, 5.0),
        "",
    )
}

fn arctan_profile() -> WarpProfile {
    WarpProfile::new(
        "arctan",
        Interval::REAL_LINE,
        |t| 1.0 / (t * t + 1.0),
        |t| -2.0 * t / (t * t + 1.0).powi(2),
        |t| (6.0 * t * t - 2.0) / (t * t + 1.0).powi(3),
    )
}

/// `t⁷/7 + 3t⁵/5 + t³ + t = ∫₀ᵗ (s² + 1)³ ds`.
fn arctan_poly(t: f64) -> f64 {
    let t2 = t * t;
    t * (1.0 + t2 * (1.0 + t2 * (0.6 + t2 / 7.0)))
}

/// `(t² + 1) f′ = λ*(t⁷/7 + 3t⁵/5 + t³ + t) + (n−2)(2t − 4 arctan t + C)`
/// for `h = arctan t`, `a = b = 1`.
pub fn arctan_potential(n: usize, lambda_star: f64, constant: f64) -> Potential {
    let n2 = n as f64 - 2.0;
    let bracket = move |t: f64| lambda_star * arctan_poly(t) + n2 * (2.0 * t - 4.0 * t.atan() + constant);
    let slope = move |t: f64| {
        let s = t * t + 1.0;
        lambda_star * s.powi(3) + n2 * (2.0 - 4.0 / s)
    };
    Potential::closed_form(
        move |t| bracket(t) / (t * t + 1.0),
        move |t| {
            let s = t * t + 1.0;
            (slope(t) - 2.0 * t * bracket(t) / s) / s
        },
    )
    .with_constant("C", constant)
}

/// The potential itself, `f(t)`, with additive constant `D` scaled by
/// `n − 2`.
pub fn arctan_potential_value(n: usize, lambda_star: f64, constant: f64, offset: f64, t: f64) -> f64 {
    let n2 = n as f64 - 2.0;
    let t2 = t * t;
    let log = t2.ln_1p();
    let at = t.atan();
    lambda_star * (t2 * t2 * t2 / 42.0 + 4.0 * t2 * t2 / 35.0 + 19.0 * t2 / 70.0 + 8.0 * log / 35.0)
        + n2 * (log - 2.0 * at * at + constant * at + offset)
}

/// Quadrature settings reproducing [`arctan_potential`] with constant `C`.
pub fn arctan_quadrature(n: usize, constant: f64) -> QuadratureSpec {
    QuadratureSpec {
        const_inner: (n as f64 - 2.0) * constant,
        ..Default::default()
    }
}

/// `h = arctan t`: complete almost soliton for any `λ*`.
pub fn arctan(n: usize, lambda_star: f64, constant: f64) -> Result<FamilyEntry> {
    Ok(FamilyEntry {
        name: "arctan".into(),
        profile: arctan_profile(),
        potential: arctan_potential(n, lambda_star, constant),
        params: SolitonParams::ricci(n, lambda_star)?,
        expected_c: ExpectedC::Varying,
        gamma: None,
        first_integral: None,
        completeness: Completeness::WholeLine,
        sample: (-5.0, 5.0),
        notes: "Closed-form potential; h′ = 1/(t² + 1) > 0 on ℝ.".into(),
    })
}

fn synthesized(
    name: &str,
    profile: WarpProfile,
    n: usize,
    lambda_star: f64,
    notes: &str,
) -> Result<FamilyEntry> {
    let params = SolitonParams::ricci(n, lambda_star)?;
    let potential = synthesize_potential(&profile, &params, &QuadratureSpec::default())?;
    Ok(FamilyEntry {
        name: name.into(),
        profile,
        potential,
        params,
        expected_c: ExpectedC::Varying,
        gamma: None,
        first_integral: None,
        completeness: Completeness::WholeLine,
        sample: (-5.0, 5.0),
        notes: notes.into(),
    })
}

/// `h = t³/3 + t`, potential by quadrature.
pub fn cubic(n: usize, lambda_star: f64) -> Result<FamilyEntry> {
    synthesized(
        "cubic",
        WarpProfile::new("cubic", Interval::REAL_LINE, |t| t * t + 1.0, |t| 2.0 * t, |_| 2.0),
        n,
        lambda_star,
        "h′ = t² + 1 ≥ 1; potential synthesized from t₀ = 0.",
    )
}

/// `h = (t² + 2) eᵗ`, potential by quadrature.
pub fn trumpet(n: usize, lambda_star: f64) -> Result<FamilyEntry> {
    synthesized(
        "trumpet",
        WarpProfile::new(
            "trumpet",
            Interval::REAL_LINE,
            |t: f64| (t * t + 2.0 * t + 2.0) * t.exp(),
            |t: f64| (t + 2.0).powi(2) * t.exp(),
            |t: f64| (t + 2.0) * (t + 4.0) * t.exp(),
        ),
        n,
        lambda_star,
        "h′ = ((t + 1)² + 1) eᵗ > 0; h″² − h′h‴ = 2t(t + 2) e^{2t}.",
    )
}

/// Steady Ricci-Bourguignon soliton with Ricci-flat fibre.
pub fn rb_steady(rb: &RBFamilyParams) -> Result<FamilyEntry> {
    let verdict = rb_classify(rb);
    let completeness = if verdict.complete {
        Completeness::WholeLine
    } else {
        Completeness::Incomplete(verdict.to_string())
    };
    Ok(FamilyEntry {
        name: "rb-steady".into(),
        profile: rb_warp_profile(rb),
        potential: rb_potential_fn(rb),
        params: rb.soliton_params(),
        expected_c: ExpectedC::Varying,
        gamma: None,
        first_integral: None,
        completeness,
        sample: (0.0, 20.0),
        notes: format!("B = {}, C = {}, D = {}, E = {}; c = −S/n.", rb.b, rb.c, rb.d, rb.e),
    })
}
