//! The five table-producing commands.
//!
//! Every command is a pure function of its [`SweepConfig`]; grid points are
//! evaluated in parallel and collected in grid order.

use rayon::prelude::*;

use quasiherm_core::{
    check_positive_definite, diagonal_metric, eigenvalues, hermitized_pencil, locate_ep,
    metric_from_params, scan_eps, unitarity_report, ComplexMatrix, Continuation, Error,
    ExceptionalPoint, HamiltonianPencil, MetricParams, PencilFamily, Propagator, StateVector,
};

use crate::config::SweepConfig;
use crate::error::CliError;
use crate::table::{format_real, Table};

/// Cell text of rows where the metric has a pole.
pub const SINGULAR: &str = "singular";
/// Cell text of rows where the metric is not positive definite.
pub const INDEFINITE: &str = "indefinite";
/// Cell text of rows whose computation failed.
pub const FAILED: &str = "error";

/// A finished table with its side information.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    /// Rows carrying the [`FAILED`] marker.
    pub failed_rows: usize,
    /// Lines for the diagnostics stream.
    pub warnings: Vec<String>,
    /// 1-based numeric columns worth plotting against the first.
    pub plot_columns: Vec<usize>,
    pub log_plot: bool,
}

impl Report {
    fn new(table: Table, plot_columns: Vec<usize>) -> Self {
        Report {
            table,
            failed_rows: 0,
            warnings: Vec::new(),
            plot_columns,
            log_plot: false,
        }
    }

    /// `0`, or `2` when any row failed.
    pub fn exit_code(&self) -> i32 {
        if self.failed_rows > 0 {
            2
        } else {
            0
        }
    }
}

fn pencil(cfg: &SweepConfig) -> HamiltonianPencil {
    HamiltonianPencil::new(cfg.family, cfg.lambda)
}

fn marker_row(param: f64, width: usize, marker: &str) -> Vec<String> {
    let mut row = vec![format_real(param)];
    row.extend((1..width).map(|_| marker.to_string()));
    row
}

fn root_cause(e: &Error) -> &Error {
    match e {
        Error::AtGridPoint { source, .. } => root_cause(source),
        other => other,
    }
}

/// Marker for a per-point metric problem; `None` for genuine failures.
fn domain_marker(e: &Error) -> Option<&'static str> {
    match root_cause(e) {
        Error::MetricSingularity { .. } => Some(SINGULAR),
        Error::NotPositiveDefinite { .. } => Some(INDEFINITE),
        _ => None,
    }
}

/// Columns `param, ReE1.., ImE1.., reality_flag`.
pub fn cmd_spectrum(cfg: &SweepConfig) -> Result<Report, CliError> {
    let pencil = pencil(cfg);
    let n = pencil.dim();
    let mut header = vec!["param".to_string()];
    header.extend((1..=n).map(|k| format!("ReE{k}")));
    header.extend((1..=n).map(|k| format!("ImE{k}")));
    header.push("reality_flag".into());
    let mut report = Report::new(Table::new(header), (2..=2 * n + 1).collect());

    let rows: Vec<_> = cfg
        .grid
        .points()
        .par_iter()
        .map(|&p| {
            (
                p,
                pencil
                    .try_evaluate(p)
                    .and_then(|h| eigenvalues(&h, cfg.tol)),
            )
        })
        .collect();
    for (p, spectrum) in rows {
        match spectrum {
            Ok(s) => {
                let mut row = vec![format_real(p)];
                row.extend(s.values().iter().map(|z| format_real(z.re)));
                row.extend(s.values().iter().map(|z| format_real(z.im)));
                row.push(s.reality().as_str().into());
                report.table.push(row);
            }
            Err(e) => {
                report.failed_rows += 1;
                report
                    .warnings
                    .push(format!("{} = {p}: {e}", cfg.family.sweep_param_name()));
                report.table.push(marker_row(p, 2 * n + 2, FAILED));
            }
        }
    }
    Ok(report)
}

/// The metric used at coupling `p`: the identity where the pencil is
/// Hermitian, the diagonal metric for the default parameters and the general
/// family otherwise.
pub fn metric_at(cfg: &SweepConfig, p: f64) -> quasiherm_core::Result<ComplexMatrix> {
    let hermitian = match cfg.family {
        PencilFamily::Hermitian => true,
        PencilFamily::NonHermitian => false,
        PencilFamily::Unified => p <= 0.0,
    };
    if hermitian {
        Ok(ComplexMatrix::identity(pencil(cfg).dim()))
    } else if cfg.params == MetricParams::interface() {
        diagonal_metric(p, cfg.lambda)
    } else {
        metric_from_params(p, cfg.lambda, cfg.params)
    }
}

/// Columns `param, theta_eig1.., is_pd`; eigenvalues ascending.
pub fn cmd_metric(cfg: &SweepConfig) -> Result<Report, CliError> {
    let n = pencil(cfg).dim();
    let mut header = vec!["param".to_string()];
    header.extend((1..=n).map(|k| format!("theta_eig{k}")));
    header.push("is_pd".into());
    let mut report = Report::new(Table::new(header), (2..=n + 1).collect());

    let rows: Vec<_> = cfg
        .grid
        .points()
        .par_iter()
        .map(|&p| {
            let pos = metric_at(cfg, p).and_then(|theta| check_positive_definite(&theta, cfg.tol));
            (p, pos)
        })
        .collect();
    let mut singular = 0;
    for (p, pos) in rows {
        match pos {
            Ok(pos) => {
                let mut row = vec![format_real(p)];
                row.extend(pos.eigenvalues.iter().map(|&w| format_real(w)));
                row.push(pos.is_pd.to_string());
                report.table.push(row);
            }
            Err(e) if domain_marker(&e) == Some(SINGULAR) => {
                singular += 1;
                report.table.push(marker_row(p, n + 2, SINGULAR));
            }
            Err(e) => {
                report.failed_rows += 1;
                report
                    .warnings
                    .push(format!("{} = {p}: {e}", cfg.family.sweep_param_name()));
                report.table.push(marker_row(p, n + 2, FAILED));
            }
        }
    }
    if singular > 0 {
        report
            .warnings
            .push(format!("metric singular at {singular} grid point(s)"));
    }
    Ok(report)
}

/// `1-2;3-4` with 1-based level indices.
fn format_pairs(ep: &ExceptionalPoint) -> String {
    ep.level_pairs
        .iter()
        .map(|(a, b)| format!("{}-{}", a + 1, b + 1))
        .collect::<Vec<_>>()
        .join(";")
}

/// Columns `param_value, kind, level_pair, residual_gap`, one row per EP.
///
/// With a bracket only that interval is searched; otherwise the grid is
/// scanned for candidates.
pub fn cmd_ep(cfg: &SweepConfig) -> Result<Report, CliError> {
    let pencil = pencil(cfg);
    let table = Table::new(["param_value", "kind", "level_pair", "residual_gap"]);
    let mut report = Report::new(table, vec![4]);
    let eps = match cfg.bracket {
        Some(bracket) => match locate_ep(&pencil, bracket, cfg.kind_probe, cfg.tol) {
            Ok(ep) => vec![ep],
            Err(Error::NoEpInBracket { .. }) => Vec::new(),
            Err(e) => return Err(e.into()),
        },
        None => scan_eps(&pencil, &cfg.grid.points(), cfg.kind_probe, cfg.tol)?,
    };
    if eps.is_empty() {
        report.warnings.push(format!(
            "no exceptional point found for {} lambda = {}",
            cfg.family, cfg.lambda
        ));
    }
    for ep in &eps {
        report.table.push(vec![
            format_real(ep.param_value),
            ep.kind.as_str().into(),
            format_pairs(ep),
            format_real(ep.residual_gap),
        ]);
    }
    Ok(report)
}

/// Columns `param, hermiticity_defect, isospectral_defect, theta_condition_number`.
///
/// Points outside the positive definite domain of the metric get marker rows
/// and do not count as failures.
pub fn cmd_hermitize(cfg: &SweepConfig) -> Result<Report, CliError> {
    let pencil = pencil(cfg);
    let table = Table::new([
        "param",
        "hermiticity_defect",
        "isospectral_defect",
        "theta_condition_number",
    ]);
    let mut report = Report::new(table, vec![2, 3, 4]);
    report.log_plot = true;
    let mut outside = 0;
    for (p, d) in hermitized_pencil(&pencil, &cfg.grid.points(), Continuation::Instantaneous) {
        match d {
            Ok(d) => report.table.push(vec![
                format_real(p),
                format_real(d.hermiticity_defect),
                format_real(d.isospectral_defect),
                format_real(d.theta_condition),
            ]),
            Err(e) => match domain_marker(&e) {
                Some(marker) => {
                    outside += 1;
                    report.table.push(marker_row(p, 4, marker));
                }
                None => {
                    report.failed_rows += 1;
                    report.warnings.push(format!("{e}"));
                    report.table.push(marker_row(p, 4, FAILED));
                }
            },
        }
    }
    if outside > 0 {
        report.warnings.push(format!(
            "{outside} grid point(s) outside the positive definite metric domain"
        ));
    }
    Ok(report)
}

/// Columns `t, theta_norm, naive_norm, mapped_norm` for `H = pencil(eta)`.
///
/// When the metric at `eta` is singular or indefinite only the naive norm is
/// recorded and the other two columns carry the corresponding marker.
pub fn cmd_evolve(cfg: &SweepConfig) -> Result<Report, CliError> {
    let pencil = pencil(cfg);
    let n = pencil.dim();
    let psi0 = match &cfg.state {
        Some(amps) if amps.len() != n => {
            return Err(CliError::Config(format!(
                "state has {} amplitudes, the model has {n} sites",
                amps.len()
            )))
        }
        Some(amps) => {
            StateVector::new(amps.clone()).map_err(|e| CliError::Config(format!("state: {e}")))?
        }
        None => StateVector::basis(n, 0)?,
    };
    let h = pencil.try_evaluate(cfg.eta)?;
    let times = cfg.times();
    let table = Table::new(["t", "theta_norm", "naive_norm", "mapped_norm"]);
    let mut report = Report::new(table, vec![2, 3, 4]);

    let metric = metric_at(cfg, cfg.eta).and_then(|theta| {
        let pos = check_positive_definite(&theta, cfg.tol)?;
        if pos.is_pd {
            Ok(theta)
        } else {
            Err(Error::NotPositiveDefinite {
                eigenvalue: pos.eigenvalues[0],
            })
        }
    });
    match metric {
        Ok(theta) => {
            let trace = unitarity_report(&h, &theta, &psi0, &times)?;
            for (k, &t) in times.iter().enumerate() {
                report.table.push(vec![
                    format_real(t),
                    format_real(trace.theta_norms[k]),
                    format_real(trace.naive_norms[k]),
                    format_real(trace.mapped_norms[k]),
                ]);
            }
        }
        Err(e) => {
            let Some(marker) = domain_marker(&e) else {
                return Err(e.into());
            };
            report.warnings.push(format!(
                "no positive definite metric at {} = {}: {e}; only the naive norm is recorded",
                cfg.family.sweep_param_name(),
                cfg.eta
            ));
            let propagator = Propagator::new(&h)?;
            let norms = times
                .par_iter()
                .map(|&t| propagator.apply_checked(&psi0, t).map(|psi| psi.norm()))
                .collect::<quasiherm_core::Result<Vec<f64>>>()?;
            for (&t, naive) in times.iter().zip(norms) {
                report.table.push(vec![
                    format_real(t),
                    marker.into(),
                    format_real(naive),
                    marker.into(),
                ]);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Grid;

    fn cfg(family: PencilFamily, lambda: f64, grid: &str) -> SweepConfig {
        SweepConfig {
            family,
            lambda,
            grid: grid.parse::<Grid>().unwrap(),
            ..SweepConfig::default()
        }
    }

    fn num(cell: &str) -> f64 {
        cell.parse().unwrap()
    }

    #[test]
    fn spectrum_table_shape() {
        let r = cmd_spectrum(&cfg(PencilFamily::Hermitian, 1.0, "-1:1:5")).unwrap();
        assert_eq!(r.table.header().len(), 10);
        assert_eq!(r.table.rows().len(), 5);
        assert_eq!(r.table.rows()[2][0], "0.0000000000000000e0");
        assert!(r.table.rows().iter().all(|row| row[9] == "real"));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn metric_identity_at_zero() {
        let r = cmd_metric(&cfg(PencilFamily::NonHermitian, 1.2, "-0.8:0.8:81")).unwrap();
        let zero = &r.table.rows()[40];
        assert_eq!(num(&zero[0]), 0.0);
        assert!(zero[1..5].iter().all(|c| num(c) == 1.0));
        assert!(r.table.rows().iter().all(|row| row[5] == "true"));
    }

    #[test]
    fn metric_singular_rows_are_marked() {
        let r = cmd_metric(&cfg(PencilFamily::NonHermitian, 1.0, "0:2:5")).unwrap();
        let row = &r.table.rows()[2];
        assert_eq!(num(&row[0]), 1.0);
        assert!(row[1..].iter().all(|c| c == SINGULAR));
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn general_params_change_the_metric() {
        let mut c = cfg(PencilFamily::NonHermitian, 1.2, "0.1:0.3:3");
        c.params = MetricParams::new(0.1, 0.0, 1.0, 0.05);
        let general = cmd_metric(&c).unwrap();
        let diagonal = cmd_metric(&cfg(PencilFamily::NonHermitian, 1.2, "0.1:0.3:3")).unwrap();
        assert_ne!(general.table, diagonal.table);
    }

    #[test]
    fn ep_bracket_without_ep_is_empty() {
        let mut c = cfg(PencilFamily::NonHermitian, 1.2, "-2:2:81");
        c.bracket = Some((0.1, 0.5));
        let r = cmd_ep(&c).unwrap();
        assert!(r.table.rows().is_empty());
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn hermitize_marks_indefinite_points() {
        let r = cmd_hermitize(&cfg(PencilFamily::NonHermitian, 1.2, "0.5:0.9:3")).unwrap();
        assert!(num(&r.table.rows()[0][3]).is_finite());
        assert_eq!(r.table.rows()[2][1], INDEFINITE);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn evolve_rejects_wrong_state_length() {
        let mut c = SweepConfig {
            state: Some(vec![num_complex::Complex64::new(1.0, 0.0); 3]),
            ..SweepConfig::default()
        };
        assert_eq!(cmd_evolve(&c).unwrap_err().exit_code(), 1);
        c.state = Some(vec![num_complex::Complex64::new(0.0, 0.0); 4]);
        assert_eq!(cmd_evolve(&c).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn evolve_default_has_101_rows() {
        let r = cmd_evolve(&SweepConfig::default()).unwrap();
        assert_eq!(r.table.rows().len(), 101);
        assert_eq!(num(&r.table.rows()[100][0]), 10.0);
    }
}
