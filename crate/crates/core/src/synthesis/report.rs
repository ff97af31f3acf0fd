use std::io::Write;

use serde::Serialize;

use super::{point_residuals, warp_is_zero};
use crate::error::{Error, Result};
use crate::geometry::{Potential, SolitonParams, WarpProfile};
use crate::numerics::scan_zeros;

/// Grid points closer than this to a zero of `h′` are skipped.
pub const ZERO_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MaxAbs {
    pub tangential: f64,
    pub orthogonal: f64,
    pub master: f64,
}

/// Per-point residuals of the soliton equations on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    /// Evaluated grid points (skipped points removed).
    pub grid: Vec<f64>,
    pub res_tangential: Vec<f64>,
    pub res_orthogonal: Vec<f64>,
    pub res_master: Vec<f64>,
    pub c_values: Vec<f64>,
    pub max_abs: MaxAbs,
    /// Zeros (or sign-changing poles) of `h′` found in the grid range.
    pub singularities: Vec<f64>,
    /// Requested points that were not evaluated.
    pub skipped: Vec<f64>,
    pub params: SolitonParams,
}

/// JSON-facing digest of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub params: SolitonParams,
    pub points: usize,
    pub interval: (f64, f64),
    pub max_abs: MaxAbs,
    pub singularities: Vec<f64>,
    pub skipped: Vec<f64>,
}

/// Outcome of [`super::check_almost_soliton`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certification {
    pub passed: bool,
    pub tol: f64,
    #[serde(skip)]
    pub report: ResidualReport,
}

/// Evaluates all three residuals on `grid` with `c` from
/// [`super::induced_c`].
///
/// Zeros of `h′` in the grid range are located first; grid points within
/// `1e-6` of one, or where `|h′| < 1e-12`, are recorded as skipped.
pub fn residual_report(
    h: &WarpProfile,
    f: &Potential,
    p: &SolitonParams,
    grid: &[f64],
) -> Result<ResidualReport> {
    p.validate()?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &t in grid {
        h.check_domain(t)?;
    }
    let lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let singularities = if hi > lo {
        let resolution = (hi - lo) / (10 * grid.len()).max(1000) as f64;
        scan_zeros(|t| h.eval(t), lo, hi, resolution)?
    } else if warp_is_zero(h, lo) {
        vec![lo]
    } else {
        Vec::new()
    };

    let mut report = ResidualReport {
        grid: Vec::with_capacity(grid.len()),
        res_tangential: Vec::with_capacity(grid.len()),
        res_orthogonal: Vec::with_capacity(grid.len()),
        res_master: Vec::with_capacity(grid.len()),
        c_values: Vec::with_capacity(grid.len()),
        max_abs: MaxAbs::default(),
        singularities,
        skipped: Vec::new(),
        params: *p,
    };

    for &t in grid {
        let near_zero = report
            .singularities
            .iter()
            .any(|z| (t - z).abs() < ZERO_EXCLUSION);
        if near_zero || warp_is_zero(h, t) {
            report.skipped.push(t);
            continue;
        }
        let r = match point_residuals(h, f, p, t) {
            Ok(r) => r,
            Err(Error::ZeroWarp { .. }) => {
                report.skipped.push(t);
                continue;
            }
            Err(e) => return Err(e),
        };
        report.grid.push(t);
        report.res_tangential.push(r.tangential);
        report.res_orthogonal.push(r.orthogonal);
        report.res_master.push(r.master);
        report.c_values.push(r.c);
        let m = &mut report.max_abs;
        m.tangential = m.tangential.max(r.tangential.abs());
        m.orthogonal = m.orthogonal.max(r.orthogonal.abs());
        m.master = m.master.max(r.master.abs());
    }
    Ok(report)
}

impl ResidualReport {
    pub fn summary(&self) -> ReportSummary {
        let lo = self.grid.first().copied().unwrap_or(f64::NAN);
        let hi = self.grid.last().copied().unwrap_or(f64::NAN);
        ReportSummary {
            params: self.params,
            points: self.grid.len(),
            interval: (lo, hi),
            max_abs: self.max_abs,
            singularities: self.singularities.clone(),
            skipped: self.skipped.clone(),
        }
    }

    /// Columns `t, res_tangential, res_orthogonal, res_master, c`.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "res_tangential", "res_orthogonal", "res_master", "c"])?;
        for i in 0..self.grid.len() {
            out.write_record([
                self.grid[i].to_string(),
                self.res_tangential[i].to_string(),
                self.res_orthogonal[i].to_string(),
                self.res_master[i].to_string(),
                self.c_values[i].to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> serde_json::Result<()> {
        serde_json::to_writer_pretty(w, &self.summary())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Interval;
    use crate::numerics::linspace;
    use crate::synthesis::check_almost_soliton;

    fn tanh() -> WarpProfile {
        WarpProfile::new(
            "tanh",
            Interval::REAL_LINE,
            f64::tanh,
            |t: f64| 1.0 / t.cosh().powi(2),
            |t: f64| -2.0 * t.tanh() / t.cosh().powi(2),
        )
    }

    #[test]
    fn cigar_is_exact() {
        let h = tanh();
        let f = Potential::conformal(&h, -2.0);
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        let r = residual_report(&h, &f, &p, &linspace(0.1, 5.0, 200)).unwrap();
        assert_eq!(r.grid.len(), 200);
        assert!(r.max_abs.master <= 1e-12);
        assert!(r.max_abs.tangential <= 1e-12);
        assert!(r.max_abs.orthogonal <= 1e-12);
        assert!(r.singularities.is_empty());
    }

    #[test]
    fn max_norms_match_columns() {
        let h = tanh();
        let f = Potential::conformal(&h, -1.0);
        let p = SolitonParams::ricci(3, 1.0).unwrap();
        let r = residual_report(&h, &f, &p, &linspace(0.2, 3.0, 40)).unwrap();
        let max = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        assert_eq!(r.max_abs.master, max(&r.res_master));
        assert_eq!(r.max_abs.tangential, max(&r.res_tangential));
        assert_eq!(r.max_abs.orthogonal, max(&r.res_orthogonal));
    }

    #[test]
    fn flat_space_with_zero_potential() {
        let h = WarpProfile::new("t", Interval::POSITIVE, |t| t, |_| 1.0, |_| 0.0);
        let p = SolitonParams::ricci(3, 1.0).unwrap();
        let r = residual_report(&h, &Potential::zero(), &p, &linspace(0.5, 4.0, 20)).unwrap();
        assert_eq!(r.max_abs.master, 0.0);
    }

    #[test]
    fn zeros_are_skipped_and_recorded() {
        let h = tanh();
        let f = Potential::conformal(&h, -2.0);
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        let r = residual_report(&h, &f, &p, &linspace(-1.0, 1.0, 21)).unwrap();
        assert_eq!(r.singularities.len(), 1);
        assert!(r.singularities[0].abs() < 1e-12);
        assert_eq!(r.skipped.len(), 1);
        assert_eq!(r.grid.len(), 20);
    }

    #[test]
    fn empty_grid() {
        let h = tanh();
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        assert!(matches!(
            residual_report(&h, &Potential::zero(), &p, &[]),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn perturbed_cigar_fails_certification() {
        let h = tanh();
        let f = Potential::conformal(&h, -2.0).perturbed(|t| 0.1 * t, |_| 0.1);
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        let c = check_almost_soliton(&h, &f, &p, (0.1, 5.0), 200, 1e-8).unwrap();
        assert!(!c.passed);
    }

    #[test]
    fn csv_layout() {
        let h = tanh();
        let f = Potential::conformal(&h, -2.0);
        let p = SolitonParams::ricci(2, 0.0).unwrap();
        let r = residual_report(&h, &f, &p, &[0.5, 1.0]).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,res_tangential,res_orthogonal,res_master,c");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.5,"));
        assert!(text.ends_with('\n'));
    }
}
