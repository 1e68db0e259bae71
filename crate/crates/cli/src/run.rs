//! Executes a validated scenario and renders its table and summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use geocalc::classical::{
    gauss_divergence_check, greens_theorem_check, path_independence_check, stokes_theorem_check,
    ClassicalReport,
};
use geocalc::identities::{identity_suite_with, DerivativePath, DEFAULT_SEED};
use geocalc::integrate::{complex_ftc_check, directed_content, seam_report, FtcOptions};
use geocalc::monogenic::{
    cauchy_reconstruct, full_cauchy_formula, monogenicity_certificate, reconstruction_table,
    ReconstructionRow, SampleRegion,
};
use geocalc::quadrature::{QuadratureSpec, Rule};
use geocalc::report::{num, Table};
use geocalc::{field::FieldFn, Multivector, Signature};
use thiserror::Error;

use crate::registry::{build_field, build_patch, build_single};
use crate::scenario::{Check, ConfigError, DerivativeName, RuleName, Scenario};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("scenario `{scenario}`: {source}")]
    Config {
        scenario: String,
        #[source]
        source: ConfigError,
    },

    #[error("scenario `{scenario}`: {source}")]
    Check {
        scenario: String,
        #[source]
        source: geocalc::Error,
    },

    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("writing {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

/// Command-line overrides.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub quad_q: Option<usize>,
    pub quad_m: Option<usize>,
    pub seed: Option<u64>,
    /// Write `wall_ms` as 0 so that tables compare byte for byte.
    pub no_timing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub name: String,
    pub check: Check,
    pub passed: bool,
    pub table: Table,
    pub summary: String,
}

pub const CONTENT_CSV_HEADER: [&str; 4] = ["scenario", "item", "value", "norm"];

fn quadrature(s: &Scenario, opts: &RunOptions) -> Result<QuadratureSpec, geocalc::Error> {
    let rule = match s.quadrature.rule {
        RuleName::Gauss => Rule::GaussLegendre,
        RuleName::Midpoint => Rule::Midpoint,
    };
    QuadratureSpec::new(
        rule,
        opts.quad_q.unwrap_or(s.quadrature.q),
        opts.quad_m.unwrap_or(s.quadrature.m),
    )
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs the scenario's check. The tolerance is the scenario's own, or the
/// default for its check.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<Outcome, RunError> {
    let cfg = |source| RunError::Config {
        scenario: s.name.clone(),
        source,
    };
    let chk = |source| RunError::Check {
        scenario: s.name.clone(),
        source,
    };
    let quad = quadrature(s, opts).map_err(chk)?;
    let tol = s.tolerance();
    let field = |spec: &Option<crate::scenario::FieldSpec>, n: usize| -> Result<FieldFn, RunError> {
        match spec {
            Some(f) => build_field(f, n).map_err(cfg),
            None => Ok(FieldFn::one(Signature::euclidean(n).map_err(chk)?)),
        }
    };
    let patch_spec = || s.patch.as_ref().ok_or_else(|| cfg(ConfigError::Invalid("missing [patch]".into())));

    let mut summary = String::new();
    let (passed, table) = match s.check {
        Check::Ftc => {
            let cx = build_patch(patch_spec()?).map_err(cfg)?;
            let n = cx.ambient_dim();
            let (f, g) = (field(&s.f, n)?, field(&s.g, n)?);
            let opts_ftc = FtcOptions {
                levels: s.quadrature.levels,
                ..FtcOptions::default()
            };
            let mut rep = complex_ftc_check(&g, &f, &cx, &quad, &opts_ftc).map_err(chk)?;
            rep.scenario = s.name.clone();
            if opts.no_timing {
                rep.rows.iter_mut().for_each(|r| r.wall_ms = 0.0);
            }
            let passed = rep.passes(tol);
            for r in &rep.rows {
                let _ = writeln!(
                    summary,
                    "  q={} m={}: rel residual {:.3e} ({} nodes)",
                    r.q, r.m, r.rel_residual, r.nodes
                );
            }
            let _ = writeln!(
                summary,
                "  finest rel residual {:.3e} vs tolerance {tol:e}; refinement {}",
                rep.finest().rel_residual,
                if rep.converged() { "converges" } else { "does not converge" }
            );
            (passed, rep.table())
        }
        Check::Content => {
            let cx = build_patch(patch_spec()?).map_err(cfg)?;
            let one = FieldFn::one(Signature::euclidean(cx.ambient_dim()).map_err(chk)?);
            let mut t = Table::new(&CONTENT_CSV_HEADER);
            let mut passed = true;
            let mut content = Multivector::zero(one.sig());
            for (i, op) in cx.patches().iter().enumerate() {
                let c = directed_content(&op.patch, &quad).map_err(chk)?;
                content += &c.value.scale(op.orientation.sign());
                t.push(vec![
                    s.name.clone(),
                    format!("patch{i}:content"),
                    c.value.to_string(),
                    num(c.value.max_norm()),
                ]);
            }
            let rep = seam_report(&one, &cx, &one, &quad).map_err(chk)?;
            for seam in &rep.seams {
                t.push(vec![
                    s.name.clone(),
                    format!(
                        "seam:patch{}.face{}|patch{}.face{}",
                        seam.a.patch, seam.a.face, seam.b.patch, seam.b.face
                    ),
                    seam.sum.to_string(),
                    num(seam.sum.max_norm()),
                ]);
            }
            t.push(vec![s.name.clone(), "boundary:total".into(), rep.total.to_string(), num(rep.total.max_norm())]);
            t.push(vec![s.name.clone(), "boundary:outer".into(), rep.outer.to_string(), num(rep.outer.max_norm())]);
            let _ = writeln!(summary, "  directed content {content}");
            let _ = writeln!(summary, "  D(boundary) summed over all faces: {:.3e}", rep.total.max_norm());
            let _ = writeln!(summary, "  {} seams, largest mismatch {:.3e}", rep.seams.len(), rep.max_seam_mismatch());
            if rep.total.max_norm() > tol {
                passed = false;
                let _ = writeln!(summary, "  corollary violation: boundary content is not zero");
            }
            if rep.max_seam_mismatch() > tol {
                passed = false;
                let _ = writeln!(
                    summary,
                    "  corollary violation: shared faces do not cancel, so the glued boundary has content {:.3e}; \
                     orientations are inconsistent",
                    rep.outer.max_norm()
                );
            }
            (passed, t)
        }
        Check::Green | Check::Stokes | Check::Gauss => {
            let p = build_single(patch_spec()?).map_err(cfg)?;
            let f = field(&s.f, p.ambient_dim())?;
            let mut rep: ClassicalReport = match s.check {
                Check::Green => greens_theorem_check(&f, &p, &quad),
                Check::Stokes => stokes_theorem_check(&f, &p, &quad),
                _ => gauss_divergence_check(&f, &p, &quad),
            }
            .map_err(chk)?;
            rep.rows.iter_mut().for_each(|r| r.scenario = s.name.clone());
            classical_summary(&mut summary, &rep, tol);
            (rep.passes(tol), rep.table())
        }
        Check::Path => {
            let curves = s
                .curves
                .iter()
                .map(build_single)
                .collect::<Result<Vec<_>, _>>()
                .map_err(cfg)?;
            let n = curves[0].ambient_dim();
            let (f, g) = (field(&s.f, n)?, field(&s.g, n)?);
            let mut rep = path_independence_check(&g, &f, &curves, &quad).map_err(chk)?;
            for (i, r) in rep.rows.iter_mut().enumerate() {
                r.scenario = format!("{}#{i}", s.name);
            }
            classical_summary(&mut summary, &rep, tol);
            (rep.passes(tol), rep.table())
        }
        Check::Identities => {
            let n = s.dim.ok_or_else(|| cfg(ConfigError::Invalid("missing `dim`".into())))?;
            let path = match s.derivatives.unwrap_or_default() {
                DerivativeName::Fd => DerivativePath::FiniteDifference,
                DerivativeName::Analytic => DerivativePath::Analytic,
            };
            let seed = opts.seed.or(s.seed).unwrap_or(DEFAULT_SEED);
            let rep = identity_suite_with(n, s.trials.unwrap_or(1000), seed, path).map_err(chk)?;
            for r in &rep.rows {
                let _ = writeln!(
                    summary,
                    "  formula {}: max rel err {:.3e}, mean {:.3e}",
                    r.formula_id, r.max_rel_err, r.mean_rel_err
                );
            }
            let _ = writeln!(summary, "  Cauchy kernel rel err {:.3e} (seed {seed:#x})", rep.kernel_rel_err);
            (rep.passes(tol), rep.table())
        }
        Check::Monogenic => {
            let cx = build_patch(patch_spec()?).map_err(cfg)?;
            let n = cx.ambient_dim();
            let f = field(&s.f, n)?;
            let mut passed = true;
            if let Some(g) = &s.sample {
                let region = SampleRegion {
                    lower: g.lower.clone(),
                    upper: g.upper.clone(),
                    per_axis: g.per_axis,
                    exclusion: g.exclusion,
                };
                let cert = monogenicity_certificate(&f, &region).map_err(chk)?;
                let _ = writeln!(
                    summary,
                    "  monogenicity: max |df| {:.3e} over {} points (tolerance {:e}): {}",
                    cert.max_derivative_norm,
                    cert.points_checked,
                    cert.tolerance,
                    if cert.certified { "certified" } else { "not certified" }
                );
                passed &= cert.certified;
            }
            let mut rows = Vec::new();
            for xp in &s.points {
                let r = cauchy_reconstruct(&f, &cx, xp, &quad).map_err(chk)?;
                rows.push(ReconstructionRow {
                    n,
                    scenario: s.name.clone(),
                    x_prime: xp.clone(),
                    direct: f.try_eval(xp).map_err(chk)?,
                    reconstructed: r.value,
                    nodes: r.nodes,
                    excluded_radius: 0.0,
                });
            }
            passed &= reconstruction_summary(&mut summary, &rows, tol);
            (passed, reconstruction_table(&rows))
        }
        Check::Cauchy => {
            let p = build_single(patch_spec()?).map_err(cfg)?;
            let n = p.ambient_dim();
            let f = field(&s.f, n)?;
            let mut rows = Vec::new();
            for xp in &s.points {
                let r = full_cauchy_formula(&f, &p, xp, &quad).map_err(chk)?;
                rows.push(ReconstructionRow {
                    n,
                    scenario: s.name.clone(),
                    x_prime: xp.clone(),
                    direct: f.try_eval(xp).map_err(chk)?,
                    reconstructed: r.value,
                    nodes: r.nodes,
                    excluded_radius: r.excluded_radius,
                });
            }
            let passed = reconstruction_summary(&mut summary, &rows, tol);
            (passed, reconstruction_table(&rows))
        }
    };
    let head = format!(
        "{} [{}] {}: {}\n",
        s.name,
        s.check.as_str(),
        verdict(passed),
        describe_quad(&quad)
    );
    Ok(Outcome {
        name: s.name.clone(),
        check: s.check,
        passed,
        table,
        summary: head + &summary,
    })
}

fn describe_quad(q: &QuadratureSpec) -> String {
    let rule = match q.rule {
        Rule::GaussLegendre => "Gauss-Legendre",
        Rule::Midpoint => "midpoint",
    };
    format!("{rule} q={} m={}", q.points_per_axis, q.subdivisions)
}

fn classical_summary(out: &mut String, rep: &ClassicalReport, tol: f64) {
    for r in &rep.rows {
        let _ = writeln!(
            out,
            "  {} ({}): lhs {} rhs {} rel residual {:.3e}",
            r.theorem,
            r.scenario,
            r.lhs,
            r.rhs,
            r.rel_residual()
        );
    }
    let _ = writeln!(
        out,
        "  max rel residual {:.3e} vs tolerance {tol:e}; general-theorem consistency {:.3e}",
        rep.max_rel_residual(),
        rep.consistency
    );
}

/// Errors are measured relative to `max(1, |f(x')|)`.
fn reconstruction_summary(out: &mut String, rows: &[ReconstructionRow], tol: f64) -> bool {
    let mut passed = true;
    for r in rows {
        let rel = r.abs_err() / r.direct.max_norm().max(1.0);
        passed &= rel <= tol;
        let _ = writeln!(
            out,
            "  x' = {:?}: direct {} reconstructed {} error {:.3e}",
            r.x_prime, r.direct, r.reconstructed, rel
        );
    }
    passed
}

/// Writes the table as CSV, creating parent directories.
pub fn write_csv(table: &Table, path: &Path) -> Result<(), RunError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| RunError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    let csv_err = |source| RunError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(&table.header).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `foo.csv` -> `foo.summary.txt`.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.txt")
}

/// Writes the CSV and the summary next to it.
pub fn write_outcome(outcome: &Outcome, csv: &Path) -> Result<(), RunError> {
    write_csv(&outcome.table, csv)?;
    let path = summary_path(csv);
    fs::write(&path, &outcome.summary).map_err(|source| RunError::Io { path, source })
}
