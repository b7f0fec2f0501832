//! File formats: CSV tables and the JSON summary.
//!
//! Numbers are written with the standard shortest round-trip formatting, so
//! reading a value back yields the identical bit pattern and identical
//! inputs produce byte-identical files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use taumarch::stepper::RunHistory;

use crate::experiment::{ExperimentSpec, Mode, Summary, SweepRow};

/// Per-step table: `n,t_n,tau_n,s1,s2,s3,gamma_corr`. The first row (and
/// every row of a uniform run) carries NaN diagnostics, since no controller
/// produced those steps.
pub fn write_steps_csv(path: &Path, history: &RunHistory) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "n,t_n,tau_n,s1,s2,s3,gamma_corr")?;
    for r in &history.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n, r.t, r.tau, r.s1, r.s2, r.s3, r.gamma_corr
        )?;
    }
    out.flush()
}

/// Probe curve: `t_n,u_probe`, starting with the t = 0 value.
pub fn write_probe_csv(path: &Path, history: &RunHistory) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "t_n,u_probe")?;
    for (t, value) in history.probe_series() {
        writeln!(out, "{t},{value}")?;
    }
    out.flush()
}

/// Sweep convergence table: `delta,total_steps,max_deviation`, one row per
/// error level (the reference row closes the table with deviation 0).
pub fn write_convergence_csv(path: &Path, rows: &[SweepRow]) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "delta,total_steps,max_deviation")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{}",
            row.delta, row.total_steps, row.max_deviation
        )?;
    }
    out.flush()
}

fn json_str(value: &str) -> String {
    let mut escaped = String::with_capacity(value.len() + 2);
    escaped.push('"');
    for c in value.chars() {
        match c {
            '"' => escaped.push_str("\\\""),
            '\\' => escaped.push_str("\\\\"),
            c if (c as u32) < 0x20 => escaped.push_str(&format!("\\u{:04x}", c as u32)),
            c => escaped.push(c),
        }
    }
    escaped.push('"');
    escaped
}

/// Flat JSON summary: configuration echo plus step count and wall time.
pub fn write_summary(path: &Path, spec: &ExperimentSpec, summary: &Summary) -> io::Result<()> {
    let mut fields: Vec<(&str, String)> = vec![
        (
            "preset",
            spec.preset
                .as_deref()
                .map_or_else(|| "null".to_string(), json_str),
        ),
        ("mode", json_str(spec.mode_name())),
        ("ic", json_str(spec.ic_name())),
        ("M", spec.cells.to_string()),
    ];
    match &spec.mode {
        Mode::DeltaSweep { deltas } => {
            let list: Vec<String> = deltas.iter().map(|d| d.to_string()).collect();
            fields.push(("deltas", format!("[{}]", list.join(", "))));
        }
        _ => fields.push(("delta", spec.delta.to_string())),
    }
    fields.push(("gamma", spec.gamma.to_string()));
    fields.push(("tau0", spec.tau_min.to_string()));
    fields.push(("tau1", spec.tau_first.to_string()));
    fields.push(("variant", json_str(spec.variant_name())));
    fields.push(("probe_x", spec.probe_x.to_string()));
    if let Mode::Uniform { tau } = spec.mode {
        fields.push(("uniform_tau", tau.to_string()));
    }
    if let Some(n) = summary.total_steps {
        fields.push(("total_steps", n.to_string()));
    }
    if let Some(t) = summary.final_time {
        fields.push(("final_time", t.to_string()));
    }
    if !summary.runs.is_empty() {
        let rows: Vec<String> = summary
            .runs
            .iter()
            .map(|r| {
                format!(
                    "{{\"delta\": {}, \"total_steps\": {}, \"max_deviation\": {}}}",
                    r.delta, r.total_steps, r.max_deviation
                )
            })
            .collect();
        fields.push(("runs", format!("[{}]", rows.join(", "))));
    }
    fields.push(("wall_time", summary.wall_time.to_string()));

    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{{")?;
    let last = fields.len() - 1;
    for (i, (key, value)) in fields.iter().enumerate() {
        let comma = if i == last { "" } else { "," };
        writeln!(out, "  {}: {value}{comma}", json_str(key))?;
    }
    writeln!(out, "}}")?;
    out.flush()
}
