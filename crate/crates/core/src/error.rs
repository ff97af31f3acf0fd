use thiserror::Error;

use crate::geometry::Interval;

/// Errors raised by curvature evaluation, synthesis, classification and the
/// numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("t = {t} lies outside the domain {domain}")]
    OutOfDomain { t: f64, domain: Interval },

    #[error("warp factor vanishes at t = {t} (metric singularity)")]
    ZeroWarp { t: f64 },

    #[error("non-finite {what} at t = {t}")]
    NonFinite { what: &'static str, t: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("fibre chart is singular at coordinate value {coord}")]
    ChartSingularity { coord: f64 },

    #[error("finite-difference step {step} fails the consistency check (estimated error {estimate:e})")]
    StepTooLarge { step: f64, estimate: f64 },

    #[error("quadrature on [{lo}, {hi}] did not converge: error estimate {estimate:e} after {intervals} subintervals")]
    QuadratureDiverged {
        lo: f64,
        hi: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("ODE solution reaches a singularity at t = {t}")]
    OdeSingularity { t: f64 },

    #[error("ODE step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("series recursion is inconsistent at order {order} (defect {defect:e})")]
    SeriesInconsistent { order: usize, defect: f64 },

    #[error("series recursion is singular at order {order} (determinant {determinant:e})")]
    SeriesSingular { order: usize, determinant: f64 },

    #[error("empty grid")]
    EmptyGrid,

    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
