//! Catalog of explicit solutions.
//!
//! Each [`FamilyEntry`] bundles a warp profile, its potential, the equation
//! coefficients and a completeness verdict. Entries are built on demand by
//! [`catalog`] or [`family_by_name`]; nothing is shared or cached.

mod bourguignon;
mod catalog;
mod cigar;

pub use bourguignon::{
    rb_classify, rb_domain, rb_integrate, rb_is_complete, rb_limit_d_to_zero, rb_ode,
    rb_potential, rb_potential_fn, rb_profile, rb_radicand, rb_steady_residual, rb_warp_profile,
    rb_zero, DLimitRecord, RBFamilyParams, RbResidual, RbVerdict, BOUNDARY_REL_TOL,
};
pub use catalog::{
    arctan, arctan_potential, arctan_potential_value, arctan_quadrature, cigar, coth, cubic,
    einstein, gaussian, reciprocal, rb_steady, tan, trumpet, EinsteinKind,
};
pub use cigar::{
    cigar_cartesian, cigar_jacobian, cigar_pullback_metric, cigar_polar_potential, CigarPoint,
};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Potential, Provenance, SolitonParams, WarpProfile};

/// Value of `c` in `a Ric + b ∇²f + c g = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedC {
    Constant(f64),
    /// Almost soliton: `c` varies with `t`.
    Varying,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    /// `h′ > 0` on all of ℝ.
    WholeLine,
    /// `h′ > 0` on `(origin, ∞)`, closing smoothly at `origin`.
    ClosingHalfLine { origin: f64 },
    /// `h′ > 0` on `(lo, hi)`, closing smoothly at both ends.
    ClosingInterval { lo: f64, hi: f64 },
    Incomplete(String),
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        !matches!(self, Completeness::Incomplete(_))
    }
}

/// One explicit solution of `a Ric + b ∇²f + c g = 0`.
#[derive(Clone)]
pub struct FamilyEntry {
    pub name: String,
    pub profile: WarpProfile,
    pub potential: Potential,
    pub params: SolitonParams,
    pub expected_c: ExpectedC,
    /// `f′ = γ h′` for the surface families.
    pub gamma: Option<f64>,
    /// Constant value of `h″ − (γ/2) h′²` for the surface families.
    pub first_integral: Option<f64>,
    pub completeness: Completeness,
    /// Interval used for residual checks.
    pub sample: (f64, f64),
    pub notes: String,
}

impl fmt::Debug for FamilyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyEntry")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("expected_c", &self.expected_c)
            .field("completeness", &self.completeness)
            .field("sample", &self.sample)
            .finish_non_exhaustive()
    }
}

/// Serializable description of an entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyInfo {
    pub name: String,
    pub profile: String,
    pub params: SolitonParams,
    pub expected_c: ExpectedC,
    pub gamma: Option<f64>,
    pub completeness: Completeness,
    pub domain: (f64, f64),
    pub sample: (f64, f64),
    pub potential: Provenance,
    pub constants: std::collections::BTreeMap<String, f64>,
    pub notes: String,
}

impl FamilyEntry {
    pub fn info(&self) -> FamilyInfo {
        let d = self.profile.domain();
        FamilyInfo {
            name: self.name.clone(),
            profile: self.profile.label().to_string(),
            params: self.params,
            expected_c: self.expected_c,
            gamma: self.gamma,
            completeness: self.completeness.clone(),
            domain: (d.lo, d.hi),
            sample: self.sample,
            potential: self.potential.provenance(),
            constants: self.potential.constants().clone(),
            notes: self.notes.clone(),
        }
    }
}

pub const FAMILY_NAMES: [&str; 15] = [
    "einstein-sin",
    "einstein-cos",
    "einstein-sinh",
    "einstein-cosh",
    "einstein-exp",
    "einstein-linear",
    "gaussian",
    "cigar",
    "tan",
    "coth",
    "reciprocal",
    "arctan",
    "cubic",
    "trumpet",
    "rb-steady",
];

/// Overrides for the parametric entries; unset fields take the defaults
/// used by [`catalog`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FamilyOptions {
    pub n: Option<usize>,
    pub lambda_star: Option<f64>,
    /// The additive constant `C` of the arctan potential.
    pub constant: Option<f64>,
    pub rb: Option<RBFamilyParams>,
}

fn surface_only(name: &str, opts: &FamilyOptions) -> Result<()> {
    match opts.n {
        Some(n) if n != 2 => Err(Error::InvalidParams(format!(
            "{name} is a surface family (n = 2), got n = {n}"
        ))),
        _ => Ok(()),
    }
}

pub fn family_by_name(name: &str, opts: &FamilyOptions) -> Result<FamilyEntry> {
    if let Some(kind) = EinsteinKind::ALL.into_iter().find(|k| k.name() == name) {
        return einstein(kind, opts.n.unwrap_or(4));
    }
    match name {
        "gaussian" => gaussian(opts.n.unwrap_or(3)),
        "cigar" | "tan" | "coth" | "reciprocal" => {
            surface_only(name, opts)?;
            match name {
                "cigar" => cigar(),
                "tan" => tan(),
                "coth" => coth(),
                _ => reciprocal(),
            }
        }
        "arctan" => arctan(
            opts.n.unwrap_or(3),
            opts.lambda_star.unwrap_or(0.0),
            opts.constant.unwrap_or(0.0),
        ),
        "cubic" => cubic(opts.n.unwrap_or(3), opts.lambda_star.unwrap_or(0.0)),
        "trumpet" => trumpet(opts.n.unwrap_or(4), opts.lambda_star.unwrap_or(0.0)),
        "rb-steady" => {
            let rb = match opts.rb {
                Some(rb) => rb,
                None => RBFamilyParams::new(opts.n.unwrap_or(3), 1.0, -1.0, 2.0)?,
            };
            rb_steady(&rb)
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

/// Every entry with its default parameters.
pub fn catalog() -> Vec<FamilyEntry> {
    FAMILY_NAMES
        .iter()
        .map(|name| family_by_name(name, &FamilyOptions::default()).expect("default catalog entry"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linspace;
    use crate::synthesis::{induced_c, residual_report};

    #[test]
    fn catalog_names_are_unique_and_resolvable() {
        let all = catalog();
        assert_eq!(all.len(), FAMILY_NAMES.len());
        for (e, name) in all.iter().zip(FAMILY_NAMES) {
            assert_eq!(e.name, name);
        }
        assert!(matches!(
            family_by_name("helicoid", &FamilyOptions::default()),
            Err(Error::UnknownFamily(_))
        ));
    }

    #[test]
    fn gaussian_residuals() {
        let e = family_by_name("gaussian", &FamilyOptions::default()).unwrap();
        let grid = linspace(e.sample.0, e.sample.1, 200);
        let r = residual_report(&e.profile, &e.potential, &e.params, &grid).unwrap();
        assert!(r.max_abs.master <= 1e-12);
        assert!(r.c_values.iter().all(|c| (c + 1.0).abs() < 1e-12));
    }

    #[test]
    fn completeness_flags() {
        assert!(cigar().unwrap().completeness.is_complete());
        assert!(!coth().unwrap().completeness.is_complete());
        let rb = RBFamilyParams::new(3, 1.0, 0.0, 1.0).unwrap();
        assert!(!rb_steady(&rb).unwrap().completeness.is_complete());
    }

    #[test]
    fn einstein_c_is_constant() {
        for kind in EinsteinKind::ALL {
            let e = einstein(kind, 3).unwrap();
            let ExpectedC::Constant(c) = e.expected_c else {
                panic!("{} should have constant c", e.name);
            };
            for t in linspace(e.sample.0, e.sample.1, 11) {
                let got = induced_c(&e.profile, &e.potential, &e.params, t).unwrap();
                assert!((got - c).abs() < 1e-10, "{} at {t}: {got}", e.name);
            }
        }
    }

    #[test]
    fn surface_families_reject_other_dimensions() {
        let opts = FamilyOptions {
            n: Some(3),
            ..Default::default()
        };
        assert!(family_by_name("cigar", &opts).is_err());
    }
}
