//! Text and JSON rendering of command results.

use std::fmt::Write;

use serde::Serialize;

use super::commands::{CurveRow, ForwardRow, InvertOutcome};
use super::config::OutputFormat;
use crate::inverse::{Monotonicity, RootStatus};

/// 17 significant digits, enough to round-trip any f64.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize to JSON");
    s.push('\n');
    s
}

pub fn forward(rows: &[ForwardRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(rows),
        OutputFormat::Text => {
            let mut out = String::from("x,t,u\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{}", num(r.x), num(r.t), num(r.u));
            }
            out
        }
    }
}

pub fn curve(rows: &[CurveRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(rows),
        OutputFormat::Text => {
            let mut out = String::from("alpha,residual,kind\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    num(r.alpha),
                    num(r.residual),
                    r.kind.as_str()
                );
            }
            out
        }
    }
}

pub fn invert(o: &InvertOutcome, format: OutputFormat) -> String {
    if format == OutputFormat::Json {
        return json(o);
    }
    let r = &o.report;
    let mut out = String::new();
    let mut line = |key: &str, value: String| {
        let _ = writeln!(out, "{key} = {value}");
    };
    line(
        "status",
        match r.status {
            RootStatus::Unique => "unique",
            RootStatus::Multiple => "multiple",
        }
        .into(),
    );
    line("alpha_hat", num(r.alpha_hat));
    line(
        "roots",
        r.roots
            .iter()
            .map(|&a| num(a))
            .collect::<Vec<_>>()
            .join(" "),
    );
    line("residual", num(r.residual));
    line("derivative", num(r.derivative_at_root));
    line("sensitivity", num(r.sensitivity));
    line(
        "monotone",
        match r.monotone {
            Monotonicity::Verified => "verified",
            Monotonicity::Violated => "violated",
            Monotonicity::NotChecked => "not-checked",
        }
        .into(),
    );
    line("uniqueness_hypothesis", r.uniqueness_hypothesis.to_string());
    for s in &o.hypothesis.modes {
        line(&format!("mode.{}.f_phi", s.n), num(s.f * s.phi));
    }
    line("f_zero", num(o.endpoints.f_zero));
    line("f_one", num(o.endpoints.f_one));
    line("iterations", r.trace.len().to_string());
    for p in &o.additional {
        line(&format!("additional.t.{}", num(p.t)), num(p.residual));
    }
    out
}
