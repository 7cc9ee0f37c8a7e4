use serde::Serialize;

use super::config::Prepared;
use super::CliError;
use crate::forward::evaluate_solution;
use crate::inverse::{
    check_uniqueness_hypothesis, endpoint_values, invert_order, point_residuals, residual_with_tol,
    scan_grid, Endpoints, InversionReport, PointResidual, RootStatus, UniquenessCheck,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForwardRow {
    pub x: f64,
    pub t: f64,
    pub u: f64,
}

/// u at each (x, t), in input order.
pub fn cmd_forward(cfg: &Prepared, points: &[(f64, f64)]) -> Result<Vec<ForwardRow>, CliError> {
    let alpha = cfg.alpha()?;
    let p = &cfg.problem;
    points
        .iter()
        .enumerate()
        .map(|(i, &(x, t))| {
            let point_error = |e: crate::forward::ForwardError| CliError::Point {
                index: i + 1,
                message: e.to_string(),
            };
            let xs = p.space_point(x).map_err(point_error)?;
            let ts = p.time_point(t).map_err(point_error)?;
            let u =
                evaluate_solution(p, alpha, xs, ts, cfg.inverse.rel_tol).map_err(point_error)?;
            Ok(ForwardRow { x, t, u })
        })
        .collect()
}

/// Parses `x,t;x,t;...` or the lines of a points file. Blank lines and
/// `#` comments are skipped, as is an `x,t` header.
pub fn parse_points(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut points = Vec::new();
    for (i, raw) in text.split(['\n', ';']).enumerate() {
        let entry = raw.split('#').next().unwrap_or("").trim();
        if entry.is_empty() || entry.eq_ignore_ascii_case("x,t") {
            continue;
        }
        let bad = || {
            CliError::Config(format!(
                "points entry {}: expected `x,t`, got `{entry}`",
                i + 1
            ))
        };
        let mut parts = entry.split(',').map(str::trim);
        let (Some(x), Some(t), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        points.push((x.parse().map_err(|_| bad())?, t.parse().map_err(|_| bad())?));
    }
    if points.is_empty() {
        return Err(CliError::Config("no points given".into()));
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvertOutcome {
    pub report: InversionReport,
    pub endpoints: Endpoints,
    pub hypothesis: UniquenessCheck,
    pub additional: Vec<PointResidual>,
}

impl InvertOutcome {
    pub fn exit_code(&self) -> u8 {
        match self.report.status {
            RootStatus::Unique => super::EXIT_OK,
            RootStatus::Multiple => super::EXIT_MULTIPLE_ROOTS,
        }
    }
}

pub fn cmd_invert(cfg: &Prepared) -> Result<InvertOutcome, CliError> {
    let m = cfg.measurement()?;
    let p = &cfg.problem;
    let report = invert_order(p, &m, &cfg.inverse)?;
    let additional = point_residuals(
        p,
        m.x0(),
        &cfg.additional,
        report.alpha_hat,
        cfg.inverse.rel_tol,
    )?;
    Ok(InvertOutcome {
        endpoints: endpoint_values(p, &m),
        hypothesis: check_uniqueness_hypothesis(p, &m),
        additional,
        report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    /// Closed-form limit at α = 0 or α = 1.
    Endpoint,
    Grid,
}

impl RowKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RowKind::Endpoint => "endpoint",
            RowKind::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub alpha: f64,
    pub residual: f64,
    pub kind: RowKind,
}

/// F(α) − d on the scan grid, framed by the endpoint rows at α = 0 and 1.
pub fn cmd_curve(cfg: &Prepared) -> Result<Vec<CurveRow>, CliError> {
    let m = cfg.measurement()?;
    let p = &cfg.problem;
    let ends = endpoint_values(p, &m);
    let mut rows = Vec::with_capacity(cfg.inverse.scan_points + 2);
    rows.push(CurveRow {
        alpha: 0.0,
        residual: ends.f_zero - m.d(),
        kind: RowKind::Endpoint,
    });
    for alpha in scan_grid(&cfg.inverse) {
        let residual = residual_with_tol(p, &m, alpha, cfg.inverse.rel_tol)?;
        rows.push(CurveRow {
            alpha,
            residual,
            kind: RowKind::Grid,
        });
    }
    rows.push(CurveRow {
        alpha: 1.0,
        residual: ends.f_one - m.d(),
        kind: RowKind::Endpoint,
    });
    Ok(rows)
}
