//! Numerical kernels shared by synthesis and the family checks.

mod ode;
mod quadrature;
mod roots;
mod series;

pub use ode::{integrate_ode, OdeSpec, Trajectory};
pub use quadrature::{quadrature, QuadratureOptions, QuadratureResult};
pub use roots::{scan_zeros, ROOT_TOL};
pub use series::{series_recursion, SeriesParams, SeriesState};

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}
