//! CSV and JSON rendering of curves, sweeps and transition reports.
//!
//! CSV files open with one `# key = value` line per run parameter; stripping
//! the `# ` prefixes yields a config file that reproduces the data. Numbers
//! are written with 12 significant digits. JSON output carries the same
//! parameters under `params`.

use std::fs;
use std::io::{self, Write};

use serde_json::{json, Map, Value};

use crate::analysis::{DecayCurve, SweepResult, TransitionReport};
use crate::config::{Output, OutputFormat, RunSpec};

pub enum Report<'a> {
    Curve(&'a DecayCurve),
    Sweep(&'a SweepResult),
    Transitions(&'a DecayCurve, &'a TransitionReport),
}

/// 12 significant digits, scientific notation.
pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

fn rounded(x: f64) -> Value {
    let r: f64 = format_number(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

fn rounded_array(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| rounded(x)).collect())
}

fn header(spec: &RunSpec) -> String {
    spec.header_pairs()
        .into_iter()
        .map(|(k, v)| format!("# {k} = {v}\n"))
        .collect()
}

fn render_csv(report: &Report<'_>, spec: &RunSpec) -> String {
    let mut out = header(spec);
    match report {
        Report::Curve(curve) => {
            let survival = curve.survival_values.as_deref();
            out.push_str(if survival.is_some() {
                "tau,gamma,survival\n"
            } else {
                "tau,gamma\n"
            });
            for (i, (&tau, &g)) in curve.tau_grid.iter().zip(&curve.gamma_values).enumerate() {
                out.push_str(&format_number(tau));
                out.push(',');
                out.push_str(&format_number(g));
                if let Some(s) = survival {
                    out.push(',');
                    out.push_str(&format_number(s[i]));
                }
                out.push('\n');
            }
        }
        Report::Sweep(sweep) => {
            out.push_str("tau");
            for v in &sweep.values {
                out.push_str(&format!(",gamma_{v}"));
            }
            out.push('\n');
            if let Some(first) = sweep.curves.first() {
                for (i, &tau) in first.tau_grid.iter().enumerate() {
                    out.push_str(&format_number(tau));
                    for c in &sweep.curves {
                        out.push(',');
                        out.push_str(&format_number(c.gamma_values[i]));
                    }
                    out.push('\n');
                }
            }
        }
        Report::Transitions(_, report) => {
            out.push_str("tau_star,kind,gamma_at\n");
            for e in &report.extrema {
                out.push_str(&format!(
                    "{},{},{}\n",
                    format_number(e.tau_star),
                    e.kind.as_str(),
                    format_number(e.gamma_at)
                ));
            }
        }
    }
    out
}

fn param_value(v: &str) -> Value {
    match v {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => match v.parse::<f64>() {
            Ok(x) if x.is_finite() => serde_json::Number::from_f64(x)
                .map_or_else(|| Value::String(v.to_string()), Value::Number),
            _ => Value::String(v.to_string()),
        },
    }
}

fn render_json(report: &Report<'_>, spec: &RunSpec) -> String {
    let params: Map<String, Value> = spec
        .header_pairs()
        .into_iter()
        .map(|(k, v)| (k.to_string(), param_value(&v)))
        .collect();
    let mut root = Map::new();
    root.insert("params".into(), Value::Object(params));
    match report {
        Report::Curve(curve) => {
            root.insert("tau".into(), rounded_array(&curve.tau_grid));
            root.insert("gamma".into(), rounded_array(&curve.gamma_values));
            if let Some(s) = &curve.survival_values {
                root.insert("survival".into(), rounded_array(s));
            }
        }
        Report::Sweep(sweep) => {
            root.insert("sweep_param".into(), json!(sweep.varied_parameter.as_str()));
            root.insert("sweep_values".into(), rounded_array(&sweep.values));
            let tau = sweep
                .curves
                .first()
                .map(|c| c.tau_grid.as_slice())
                .unwrap_or(&[]);
            root.insert("tau".into(), rounded_array(tau));
            root.insert(
                "gamma".into(),
                Value::Array(
                    sweep
                        .curves
                        .iter()
                        .map(|c| rounded_array(&c.gamma_values))
                        .collect(),
                ),
            );
        }
        Report::Transitions(curve, report) => {
            root.insert("tau".into(), rounded_array(&curve.tau_grid));
            root.insert("gamma".into(), rounded_array(&curve.gamma_values));
            root.insert("refinement".into(), json!(report.refinement.as_str()));
            root.insert(
                "extrema".into(),
                Value::Array(
                    report
                        .extrema
                        .iter()
                        .map(|e| {
                            json!({
                                "tau_star": rounded(e.tau_star),
                                "kind": e.kind.as_str(),
                                "gamma_at": rounded(e.gamma_at),
                            })
                        })
                        .collect(),
                ),
            );
        }
    }
    let mut text =
        serde_json::to_string_pretty(&Value::Object(root)).expect("json values serialize");
    text.push('\n');
    text
}

pub fn render(report: &Report<'_>, spec: &RunSpec, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => render_csv(report, spec),
        OutputFormat::Json => render_json(report, spec),
    }
}

/// Writes the rendered report to `destination`; returns bytes written.
pub fn emit(
    report: &Report<'_>,
    spec: &RunSpec,
    format: OutputFormat,
    destination: &Output,
) -> io::Result<usize> {
    let text = render(report, spec, format);
    match destination {
        Output::Stdout => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Output::Path(path) => fs::write(path, text.as_bytes())?,
    }
    Ok(text.len())
}
