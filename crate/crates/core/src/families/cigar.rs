//! Cartesian form of the cigar soliton `dt² + tanh²t du²`.
//!
//! Under `x = sinh t sin u`, `y = sinh t cos u` the metric becomes
//! `(dx² + dy²)/(1 + x² + y²)` and the potential `f = −2 log cosh t`
//! becomes `−log(1 + x² + y²)`.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CigarPoint {
    pub x: f64,
    pub y: f64,
    /// `1/(1 + x² + y²)`.
    pub conformal_factor: f64,
    /// `−log(1 + x² + y²)`.
    pub f_value: f64,
    /// `1 + x² + y² − cosh²t`, zero up to rounding.
    pub identity_defect: f64,
}

pub fn cigar_cartesian(t: f64, u: f64) -> CigarPoint {
    let (s, c) = u.sin_cos();
    let x = t.sinh() * s;
    let y = t.sinh() * c;
    let q = 1.0 + x * x + y * y;
    CigarPoint {
        x,
        y,
        conformal_factor: 1.0 / q,
        f_value: -q.ln(),
        identity_defect: q - t.cosh().powi(2),
    }
}

/// Potential in polar form, `f(t) = −2 log cosh t`.
pub fn cigar_polar_potential(t: f64) -> f64 {
    -2.0 * t.cosh().ln()
}

/// Jacobian `∂(x, y)/∂(t, u)` as rows `[∂x/∂t, ∂x/∂u]`, `[∂y/∂t, ∂y/∂u]`.
pub fn cigar_jacobian(t: f64, u: f64) -> [[f64; 2]; 2] {
    let (s, c) = u.sin_cos();
    [
        [t.cosh() * s, t.sinh() * c],
        [t.cosh() * c, -t.sinh() * s],
    ]
}

/// Pullback of `(dx² + dy²)/(1 + x² + y²)` to `(t, u)`, as a symmetric
/// 2×2 matrix.
pub fn cigar_pullback_metric(t: f64, u: f64) -> [[f64; 2]; 2] {
    let j = cigar_jacobian(t, u);
    let w = cigar_cartesian(t, u).conformal_factor;
    let mut g = [[0.0; 2]; 2];
    for (a, row) in g.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            *entry = w * (j[0][a] * j[0][b] + j[1][a] * j[1][b]);
        }
    }
    g
}
