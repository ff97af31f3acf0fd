//! Reproducible command-line runs over the `warpsol` library.
//!
//! A run is described by a [`RunConfig`]; [`run`] evaluates it, writes
//! `<output>.csv` and `<output>.json`, and reports whether every
//! certification passed.

pub mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context as _, Result};
use serde_json::{json, Value};
use warpsol::families::{
    family_by_name, rb_classify, rb_domain, rb_potential, rb_profile, ExpectedC, FamilyEntry,
    FamilyOptions, RBFamilyParams,
};
use warpsol::numerics::{linspace, series_recursion, SeriesParams};
use warpsol::synthesis::{
    check_n2_system, induced_c, residual_report, synthesize_potential, QuadratureSpec,
    DEFAULT_RESIDUAL_TOL,
};
use warpsol::{Error, Interval, SolitonParams, WarpProfile};

pub use config::{parse_assignment, parse_config, Command, ConfigError, RawConfig, RunConfig};

/// Exit status for a run whose certification failed or whose metric is
/// incomplete.
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Default quadrature tolerance for custom profiles without exact
/// derivative expressions.
pub const FD_QUADRATURE_TOL: f64 = 1e-7;

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    /// Human-readable lines for stdout.
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

/// Maps an error from [`run`] to a process exit status.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return EXIT_CONFIG;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidParams(_) | Error::UnknownFamily(_)) => EXIT_CONFIG,
        Some(_) => EXIT_NUMERICAL,
        None => EXIT_IO,
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Verify => verify(cfg),
        Command::Synthesize => synthesize(cfg),
        Command::ClassifyRb => classify_rb(cfg),
        Command::Sample => sample(cfg),
        Command::Series => series(cfg),
    }
}

/// Rows of already formatted cells.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(f64::to_string).collect());
    }

    fn write<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn write_outputs(
    cfg: &RunConfig,
    csv_body: impl FnOnce(&mut dyn Write) -> csv::Result<()>,
    summary: &Value,
) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    if cfg.csv {
        let path = PathBuf::from(format!("{}.csv", cfg.output));
        let mut w = BufWriter::new(
            File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        );
        csv_body(&mut w).with_context(|| format!("writing {}", path.display()))?;
        w.flush()?;
        files.push(path);
    }
    if cfg.json {
        let path = PathBuf::from(format!("{}.json", cfg.output));
        let mut w = BufWriter::new(
            File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        );
        serde_json::to_writer_pretty(&mut w, summary)?;
        w.write_all(b"\n")?;
        w.flush()?;
        files.push(path);
    }
    Ok(files)
}

fn pass_word(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Steady-family constants from `n`, `B` or `C`, `D`, `E`.
fn rb_params(cfg: &RunConfig) -> Result<RBFamilyParams> {
    let n = cfg.count("n")?.unwrap_or(3);
    let d = cfg.real_or("D", -1.0);
    let e = cfg.real_or("E", 2.0);
    let rb = match (cfg.real("B"), cfg.real("C")) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::new("B", "give either B or C, not both").into())
        }
        (Some(b), None) => RBFamilyParams::from_b(n, b, d, e),
        (None, c) => RBFamilyParams::new(n, c.unwrap_or(1.0), d, e),
    };
    rb.map_err(|err| {
        let key = ["n", "B", "C", "D", "E"]
            .into_iter()
            .find(|k| cfg.real(k).is_some())
            .unwrap_or("n");
        ConfigError::new(key, err.to_string()).into()
    })
}

/// Catalog entry named by `family`, with the parameter keys it accepts.
fn catalog_entry(cfg: &RunConfig) -> Result<FamilyEntry> {
    let name = cfg
        .family
        .as_deref()
        .ok_or_else(|| ConfigError::new("family", "missing"))?;
    let accepts: &[&str] = match name {
        "arctan" => &["n", "lambda_star", "C"],
        "cubic" | "trumpet" => &["n", "lambda_star"],
        "rb-steady" => &["n", "B", "C", "D", "E"],
        _ => &["n"],
    };
    for key in ["n", "lambda_star", "B", "C", "D", "E"] {
        if cfg.real(key).is_some() && !accepts.contains(&key) {
            return Err(ConfigError::new(key, format!("not a parameter of `{name}`")).into());
        }
    }
    let opts = FamilyOptions {
        n: cfg.count("n")?,
        lambda_star: cfg.real("lambda_star"),
        constant: if name == "arctan" { cfg.real("C") } else { None },
        rb: if name == "rb-steady" {
            Some(rb_params(cfg)?)
        } else {
            None
        },
    };
    family_by_name(name, &opts).map_err(|err| match err {
        Error::InvalidParams(msg) => {
            let key = accepts
                .iter()
                .copied()
                .find(|k| cfg.real(k).is_some())
                .unwrap_or("family");
            ConfigError::new(key, msg).into()
        }
        other => other.into(),
    })
}

fn grid(cfg: &RunConfig, default: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = cfg.interval.unwrap_or(default);
    linspace(lo, hi, cfg.grid_points)
}

fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let entry = catalog_entry(cfg)?;
    let tol = cfg.real_or("tol", DEFAULT_RESIDUAL_TOL);
    let grid = grid(cfg, entry.sample);
    let report = residual_report(&entry.profile, &entry.potential, &entry.params, &grid)?;
    let mut passed = report.max_abs.master <= tol;
    let mut lines = vec![format!(
        "verify {}: max |res_master| = {:e} over {} points (tol {:e}) {}",
        entry.name,
        report.max_abs.master,
        report.grid.len(),
        tol,
        pass_word(passed)
    )];

    let c_deviation = match entry.expected_c {
        ExpectedC::Constant(c0) => {
            let dev = report.c_values.iter().map(|c| (c - c0).abs()).fold(0.0, f64::max);
            let ok = dev <= tol;
            passed &= ok;
            lines.push(format!("  induced c = {c0}: max deviation {dev:e} {}", pass_word(ok)));
            Some(dev)
        }
        ExpectedC::Varying => None,
    };

    let surface = match entry.gamma {
        Some(gamma0) => {
            let gamma = cfg.real_or("gamma", gamma0);
            let c = match (cfg.real("c"), entry.expected_c) {
                (Some(c), _) => c,
                (None, ExpectedC::Constant(c)) => c,
                (None, ExpectedC::Varying) => {
                    return Err(ConfigError::new("c", "required for this family").into())
                }
            };
            let ok = check_n2_system(&entry.profile, &entry.potential, &entry.params, gamma, c, &grid, tol)?;
            passed &= ok;
            lines.push(format!("  surface system (gamma = {gamma}, c = {c}) {}", pass_word(ok)));
            Some(json!({ "gamma": gamma, "c": c, "passed": ok }))
        }
        None => {
            for key in ["gamma", "c"] {
                if cfg.real(key).is_some() {
                    return Err(ConfigError::new(key, "only used by surface families").into());
                }
            }
            None
        }
    };

    let summary = json!({
        "command": cfg.command.name(),
        "family": entry.info(),
        "tol": tol,
        "passed": passed,
        "report": report.summary(),
        "c_max_deviation": c_deviation,
        "surface_system": surface,
    });
    let files = write_outputs(cfg, |w| report.write_csv(w), &summary)?;
    Ok(Outcome { passed, lines, files })
}

thread_local! {
    static BUILTINS: meval::Context<'static> = meval::builtin();
}

/// Compiles an expression in `t`.
fn compile_expression(key: &str, text: &str) -> Result<impl Fn(f64) -> f64 + Send + Sync> {
    let expr: meval::Expr = text
        .parse()
        .map_err(|e| ConfigError::new(key, format!("cannot parse `{text}`: {e}")))?;
    let _ = expr
        .clone()
        .bind("t")
        .map_err(|e| ConfigError::new(key, format!("`{text}`: {e}")))?;
    Ok(move |t: f64| {
        BUILTINS.with(|b| expr.eval_with_context((("t", t), b)).unwrap_or(f64::NAN))
    })
}

fn synthesize(cfg: &RunConfig) -> Result<Outcome> {
    let custom = cfg.family.as_deref().is_none_or(|f| f == "custom");
    let (profile, defaults, sample) = if custom {
        let text = cfg
            .profile
            .as_deref()
            .ok_or_else(|| ConfigError::new("profile", "required for a custom profile"))?;
        let (lo, hi) = cfg.domain.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        let domain = Interval::new(lo, hi).map_err(|e| ConfigError::new("domain", e.to_string()))?;
        let label = format!("h′(t) = {text}");
        let eval = compile_expression("profile", text)?;
        let h = match (&cfg.profile_d1, &cfg.profile_d2) {
            (Some(d1), Some(d2)) => {
                if cfg.real("fd_step").is_some() {
                    return Err(ConfigError::new("fd_step", "not used with exact derivatives").into());
                }
                WarpProfile::new(
                    label,
                    domain,
                    eval,
                    compile_expression("profile_d1", d1)?,
                    compile_expression("profile_d2", d2)?,
                )
            }
            (None, None) => {
                let step = cfg.real_or("fd_step", warpsol::geometry::DEFAULT_FD_STEP);
                WarpProfile::from_fn(label, domain, eval, step)
                    .map_err(|e| ConfigError::new("fd_step", e.to_string()))?
            }
            (Some(_), None) => return Err(ConfigError::new("profile_d2", "required with profile_d1").into()),
            (None, Some(_)) => return Err(ConfigError::new("profile_d1", "required with profile_d2").into()),
        };
        let sample = (lo.max(-5.0), hi.min(5.0));
        (h, SolitonParams::new(3, 1.0, 1.0, 0.0)?, sample)
    } else {
        for key in ["profile", "profile_d1", "profile_d2", "domain", "fd_step"] {
            let set = match key {
                "profile" => cfg.profile.is_some(),
                "profile_d1" => cfg.profile_d1.is_some(),
                "profile_d2" => cfg.profile_d2.is_some(),
                "domain" => cfg.domain.is_some(),
                _ => cfg.real(key).is_some(),
            };
            if set {
                return Err(ConfigError::new(key, "only used with family = custom").into());
            }
        }
        let entry = family_by_name(cfg.family.as_deref().unwrap_or_default(), &FamilyOptions::default())?;
        (entry.profile, entry.params, entry.sample)
    };

    let params = SolitonParams::new(
        cfg.count("n")?.unwrap_or(defaults.n),
        cfg.real_or("a", 1.0),
        cfg.real_or("b", 1.0),
        cfg.real_or("lambda_star", defaults.lambda_star),
    )
    .map_err(|e| ConfigError::new("n", e.to_string()))?;
    let (lo, hi) = cfg.interval.unwrap_or(sample);
    let base = cfg.real("t0").unwrap_or(if profile.domain().contains(0.0) {
        0.0
    } else {
        0.5 * (lo + hi)
    });
    // Finite-difference third derivatives carry noise near 1e-8, which the
    // default quadrature tolerance cannot resolve.
    let fd_only = custom && cfg.profile_d1.is_none();
    let default_tol = if fd_only { FD_QUADRATURE_TOL } else { QuadratureSpec::default().abs_tol };
    let spec = QuadratureSpec {
        abs_tol: cfg.real_or("abs_tol", default_tol),
        rel_tol: cfg.real_or("rel_tol", default_tol),
        base_point: base,
        const_inner: cfg.real_or("C", 0.0),
        const_outer: cfg.real_or("D", 0.0),
        ..QuadratureSpec::default()
    };
    let potential = synthesize_potential(&profile, &params, &spec)?;

    let tol = cfg.real_or("tol", DEFAULT_RESIDUAL_TOL);
    let report = residual_report(&profile, &potential, &params, &grid(cfg, (lo, hi)))?;
    let mut table = Table::new(&[
        "t", "h1", "f1", "f2", "res_tangential", "res_orthogonal", "res_master", "c",
    ]);
    for (i, &t) in report.grid.iter().enumerate() {
        let jet = potential.jet(t)?;
        table.push(&[
            t,
            profile.eval(t),
            jet.first,
            jet.second,
            report.res_tangential[i],
            report.res_orthogonal[i],
            report.res_master[i],
            report.c_values[i],
        ]);
    }
    let passed = report.max_abs.master <= tol;
    let lines = vec![format!(
        "synthesize {}: max |res_master| = {:e} over {} points (tol {:e}) {}",
        profile.label(),
        report.max_abs.master,
        report.grid.len(),
        tol,
        pass_word(passed)
    )];
    let summary = json!({
        "command": cfg.command.name(),
        "profile": profile.label(),
        "quadrature": {
            "abs_tol": spec.abs_tol,
            "rel_tol": spec.rel_tol,
            "base_point": spec.base_point,
            "const_inner": spec.const_inner,
            "const_outer": spec.const_outer,
        },
        "tol": tol,
        "passed": passed,
        "report": report.summary(),
    });
    let files = write_outputs(cfg, |w| table.write(w), &summary)?;
    Ok(Outcome { passed, lines, files })
}

fn classify_rb(cfg: &RunConfig) -> Result<Outcome> {
    if let Some(f) = cfg.family.as_deref().filter(|f| *f != "rb-steady") {
        return Err(ConfigError::new("family", format!("classify-rb needs rb-steady, got `{f}`")).into());
    }
    let rb = rb_params(cfg)?;
    let verdict = rb_classify(&rb);
    let domain = rb_domain(&rb);
    let mut table = Table::new(&["t", "h1", "f1"]);
    let mut skipped = Vec::new();
    for t in grid(cfg, (0.0, 5.0)) {
        if t <= domain.lo || t >= domain.hi {
            skipped.push(t);
            continue;
        }
        match (rb_profile(&rb, t), rb_potential(&rb, t)) {
            (Ok(h1), Ok(f1)) => table.push(&[t, h1, f1]),
            (Err(Error::ZeroWarp { .. }), _) | (_, Err(Error::ZeroWarp { .. })) => skipped.push(t),
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
    }
    let lines = vec![verdict.to_string()];
    let summary = json!({
        "command": cfg.command.name(),
        "params": rb,
        "verdict": verdict,
        "verdict_text": verdict.to_string(),
        "domain": (domain.lo, domain.hi),
        "points": table.rows.len(),
        "skipped": skipped,
    });
    let files = write_outputs(cfg, |w| table.write(w), &summary)?;
    Ok(Outcome {
        passed: verdict.complete,
        lines,
        files,
    })
}

fn sample(cfg: &RunConfig) -> Result<Outcome> {
    let entry = catalog_entry(cfg)?;
    let mut table = Table::new(&["t", "h1", "f1", "c"]);
    let mut skipped = Vec::new();
    for t in grid(cfg, entry.sample) {
        let values = entry
            .potential
            .eval(t)
            .and_then(|f1| Ok((f1, induced_c(&entry.profile, &entry.potential, &entry.params, t)?)));
        match values {
            Ok((f1, c)) => table.push(&[t, entry.profile.eval(t), f1, c]),
            Err(Error::ZeroWarp { .. }) => skipped.push(t),
            Err(e) => return Err(e.into()),
        }
    }
    let lines = vec![format!("sample {}: {} points, {} skipped", entry.name, table.rows.len(), skipped.len())];
    let summary = json!({
        "command": cfg.command.name(),
        "family": entry.info(),
        "points": table.rows.len(),
        "skipped": skipped,
    });
    let files = write_outputs(cfg, |w| table.write(w), &summary)?;
    Ok(Outcome {
        passed: true,
        lines,
        files,
    })
}

fn series(cfg: &RunConfig) -> Result<Outcome> {
    // Defaults give the flat Gaussian seeds h′ = f′ = t in dimension 3.
    let params = SeriesParams {
        a0: cfg.real_or("a0", 0.0),
        b0: cfg.real_or("b0", 0.0),
        ..SeriesParams::odd(
            cfg.count("n")?.unwrap_or(3),
            cfg.real_or("c", -1.0),
            cfg.real_or("lambda_star", 1.0),
            cfg.real_or("a1", 1.0),
            cfg.real_or("b1", 1.0),
        )
    };
    let order = cfg.count("order")?.unwrap_or(20);
    let state = series_recursion(&params, order)?;
    let lines = vec![format!("series: {} coefficients", state.coeffs_a.len())];
    let summary = json!({
        "command": cfg.command.name(),
        "series": state,
    });
    let files = write_outputs(cfg, |w| state.write_csv(w), &summary)?;
    Ok(Outcome {
        passed: true,
        lines,
        files,
    })
}
