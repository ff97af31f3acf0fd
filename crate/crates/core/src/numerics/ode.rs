//! Scalar first-order ODE integration with the Dormand-Prince 5(4) pair.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

/// Fifth-order weights (equal to the last row of `A`, FSAL).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];

/// Embedded fourth-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Initial value problem `u′ = rhs(t, u)`, `u(t0) = u0`.
pub struct OdeSpec {
    pub rhs: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    pub t0: f64,
    pub u0: f64,
    pub initial_step: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Treat `u ≤ 0` as a singularity (fractional powers of `u` in the rhs).
    pub require_positive: bool,
    pub max_steps: usize,
}

impl OdeSpec {
    pub fn new(rhs: impl Fn(f64, f64) -> f64 + Send + Sync + 'static, t0: f64, u0: f64) -> Self {
        Self {
            rhs: Box::new(rhs),
            t0,
            u0,
            initial_step: 1e-3,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            require_positive: false,
            max_steps: 1_000_000,
        }
    }

    pub fn tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn positive(mut self) -> Self {
        self.require_positive = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParams("ODE tolerances must be positive".into()));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidParams("initial step must be positive".into()));
        }
        if !(self.t0.is_finite() && self.u0.is_finite()) {
            return Err(Error::InvalidParams("non-finite initial condition".into()));
        }
        if self.require_positive && self.u0 <= 0.0 {
            return Err(Error::OdeSingularity { t: self.t0 });
        }
        if !(self.rhs)(self.t0, self.u0).is_finite() {
            return Err(Error::NonFinite {
                what: "ODE right-hand side",
                t: self.t0,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for OdeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OdeSpec")
            .field("t0", &self.t0)
            .field("u0", &self.u0)
            .field("abs_tol", &self.abs_tol)
            .field("rel_tol", &self.rel_tol)
            .finish_non_exhaustive()
    }
}

/// Accepted steps `(t, u)`, starting with the initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<(f64, f64)>,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> (f64, f64) {
        *self.points.last().expect("trajectory holds the initial point")
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "u"])?;
        for &(t, u) in &self.points {
            out.write_record([t.to_string(), u.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Integrates from `spec.t0` to `t_end` (either direction).
pub fn integrate_ode(spec: &OdeSpec, t_end: f64) -> Result<Trajectory> {
    spec.validate()?;
    if !t_end.is_finite() {
        return Err(Error::InvalidParams("non-finite end time".into()));
    }
    let dir = if t_end >= spec.t0 { 1.0 } else { -1.0 };
    let span = (t_end - spec.t0).abs();
    let mut t = spec.t0;
    let mut u = spec.u0;
    let mut points = vec![(t, u)];
    let mut rejected = 0;
    let mut h = spec.initial_step.min(span.max(f64::MIN_POSITIVE));
    let mut k = [0.0; 7];
    k[0] = (spec.rhs)(t, u);

    let mut steps = 0;
    while (t_end - t) * dir > 0.0 {
        steps += 1;
        if steps > spec.max_steps {
            return Err(Error::StepUnderflow { t });
        }
        let remaining = (t_end - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(if spec.require_positive {
                Error::OdeSingularity { t }
            } else {
                Error::StepUnderflow { t }
            });
        }
        let hs = h * dir;

        let mut stage_ok = true;
        for s in 1..7 {
            let mut ui = u;
            for (j, kj) in k.iter().enumerate().take(s) {
                ui += hs * A[s][j] * kj;
            }
            if spec.require_positive && ui <= 0.0 {
                stage_ok = false;
                break;
            }
            k[s] = (spec.rhs)(t + C[s] * hs, ui);
            if !k[s].is_finite() {
                stage_ok = false;
                break;
            }
        }
        if !stage_ok {
            rejected += 1;
            h *= 0.25;
            continue;
        }

        let mut u5 = u;
        let mut err = 0.0;
        for s in 0..7 {
            u5 += hs * B5[s] * k[s];
            err += hs * (B5[s] - B4[s]) * k[s];
        }
        let scale = spec.abs_tol + spec.rel_tol * u.abs().max(u5.abs());
        let ratio = err.abs() / scale;

        if ratio <= 1.0 && (!spec.require_positive || u5 > 0.0) && u5.is_finite() {
            t = if last { t_end } else { t + hs };
            u = u5;
            points.push((t, u));
            k[0] = k[6];
            let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            h *= grow;
        } else {
            rejected += 1;
            let shrink = if ratio.is_finite() {
                (0.9 * ratio.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h *= shrink;
        }
    }

    Ok(Trajectory {
        points,
        rejected_steps: rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn butcher_tableau_consistency() {
        for s in 0..7 {
            let row: f64 = A[s].iter().sum();
            assert!((row - C[s]).abs() < 1e-15, "row {s}");
        }
        let b5: f64 = B5.iter().sum();
        let b4: f64 = B4.iter().sum();
        assert!((b5 - 1.0).abs() < 1e-15);
        assert!((b4 - 1.0).abs() < 1e-15);
        // Quadrature order conditions Σ bᵢ cᵢ^{q−1} = 1/q.
        for q in 1..=5 {
            let s: f64 = (0..7).map(|i| B5[i] * C[i].powi(q - 1)).sum();
            assert!((s - 1.0 / q as f64).abs() < 1e-14, "order {q}");
        }
    }

    #[test]
    fn exponential_decay() {
        let spec = OdeSpec::new(|_, u| -u, 0.0, 1.0);
        let traj = integrate_ode(&spec, 3.0).unwrap();
        let (t, u) = traj.last();
        assert_eq!(t, 3.0);
        assert!((u - (-3.0_f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn backward_integration() {
        let spec = OdeSpec::new(|_, u| u, 1.0, 1.0);
        let (t, u) = integrate_ode(&spec, 0.0).unwrap().last();
        assert_eq!(t, 0.0);
        assert!((u - (-1.0_f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn square_root_collapse_is_a_singularity() {
        // u′ = 1.5/u, u(0) = 1 has u² = 3t + 1, vanishing at t = −1/3.
        let spec = OdeSpec::new(|_, u| 1.5 / u, 0.0, 1.0).positive();
        let err = integrate_ode(&spec, -1.0).unwrap_err();
        match err {
            Error::StepUnderflow { t } | Error::OdeSingularity { t } => {
                assert!((t + 1.0 / 3.0).abs() < 1e-3, "stopped at {t}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deterministic() {
        let run = || integrate_ode(&OdeSpec::new(|t, u| t.sin() * u, 0.0, 1.0), 4.0).unwrap();
        assert_eq!(run(), run());
    }
}
