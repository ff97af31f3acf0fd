//! Ricci almost solitons and steady Ricci-Bourguignon solitons on warped
//! products `dt² + h′(t)² ds*²` over a one-dimensional base.
//!
//! The crate is organised around four layers:
//!
//! * [`geometry`]: closed-form curvature of the warped product (Ricci
//!   components, scalar curvature, Hessian and Laplacian of a radial
//!   potential) and an independent finite-difference Ricci oracle.
//! * [`synthesis`]: synthesis of a potential `f′` from a prescribed warp
//!   profile, the induced function `c(t)`, and residual reports for the
//!   soliton equations.
//! * [`families`]: a catalog of explicit solutions (Einstein profiles, the
//!   Gaussian and cigar solitons, the `n = 2` first-integral family, the
//!   three complete almost-soliton examples and the steady
//!   Ricci-Bourguignon family).
//! * [`numerics`]: adaptive Gauss-Kronrod quadrature, an embedded
//!   Dormand-Prince integrator, the power-series recursion and zero scans.
//!
//! Sign conventions: `Ric(∂t, ∂t) = −(n−1) h‴/h′` and the fibre is Einstein
//! with `Ric* = λ* g*`, so `λ* = n − 2` for the unit round sphere.

pub mod error;
pub mod families;
pub mod geometry;
pub mod numerics;
pub mod synthesis;

pub use error::{Error, Result};
pub use geometry::{Interval, Potential, SolitonParams, WarpProfile};
