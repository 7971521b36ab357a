use std::fmt::Write as _;
use std::path::Path;

use hsmult_core::theorems::{Value, Verdict};
use serde_json::{json, Map};

use crate::error::CliError;
use crate::runner::{format_levels, Outcome, Table};

fn status(code: i32) -> &'static str {
    match code {
        0 => "ok",
        2 => "verdict failed",
        _ => "error",
    }
}

fn render_verdict(s: &mut String, v: &Verdict) {
    let window = v.window.map(|(a, b)| format!(" on n in {}..{}", a, b)).unwrap_or_default();
    let _ = writeln!(s, "verdict {}: {}{}", v.claim, if v.holds { "HOLDS" } else { "FAILS" }, window);
    for (k, val) in &v.witness {
        let _ = writeln!(s, "  {} = {}", k, val);
    }
    for c in &v.certificates {
        let _ = writeln!(s, "  certificate {}: levels {}", c.what, format_levels(&c.levels));
    }
    if let Some(c) = &v.counterexample {
        let at = c.n.map(|n| format!(" at n = {}", n)).unwrap_or_default();
        let _ = writeln!(s, "  counterexample: {}{}: {} vs {}", c.what, at, c.lhs, c.rhs);
    }
}

/// The text report; identical inputs give identical bytes.
pub fn render_report(o: &Outcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "hsmult {}", o.command.name());
    for (k, v) in &o.input {
        let _ = writeln!(s, "{}: {}", k, v);
    }
    if !o.values.is_empty() {
        s.push('\n');
        for (k, v) in &o.values {
            let _ = writeln!(s, "{} = {}", k, v);
        }
    }
    for v in &o.verdicts {
        s.push('\n');
        render_verdict(&mut s, v);
    }
    for (name, reason) in &o.skipped {
        let _ = writeln!(s, "\nskipped {}: {}", name, reason);
    }
    let code = o.exit_code();
    let _ = writeln!(s, "\nstatus: {} (exit {})", status(code), code);
    s
}

fn value_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Int(x) => json!(x),
        Value::Bool(b) => json!(b),
        Value::Text(t) => json!(t),
        Value::Table(rows) => json!(rows.iter().map(|(n, x)| json!([n, x])).collect::<Vec<_>>()),
    }
}

fn verdict_json(v: &Verdict) -> serde_json::Value {
    let mut witness = Map::new();
    for (k, val) in &v.witness {
        witness.insert(k.clone(), value_json(val));
    }
    json!({
        "claim": v.claim.name(),
        "holds": v.holds,
        "window": v.window.map(|(a, b)| json!([a, b])),
        "witness": witness,
        "counterexample": v.counterexample.as_ref().map(|c| json!({
            "what": c.what, "n": c.n, "lhs": c.lhs, "rhs": c.rhs,
        })),
        "certificates": v.certificates.iter().map(|c| json!({"what": c.what, "levels": c.levels})).collect::<Vec<_>>(),
    })
}

pub fn summary_json(o: &Outcome) -> serde_json::Value {
    let mut input = Map::new();
    for (k, v) in &o.input {
        input.insert(k.clone(), json!(v));
    }
    let mut values = Map::new();
    for (k, v) in &o.values {
        values.insert(k.clone(), value_json(v));
    }
    let code = o.exit_code();
    json!({
        "command": o.command.name(),
        "exit_code": code,
        "status": status(code),
        "input": input,
        "values": values,
        "verdicts": o.verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
        "skipped": o.skipped.iter().map(|(c, r)| json!({"check": c, "reason": r})).collect::<Vec<_>>(),
        "tables": o.tables.iter().map(|t| format!("{}.csv", t.name)).collect::<Vec<_>>(),
    })
}

pub fn error_json(command: &str, e: &CliError) -> serde_json::Value {
    json!({"command": command, "exit_code": 1, "status": "error", "error": e.to_string()})
}

fn write_csv(dir: &Path, t: &Table) -> Result<(), CliError> {
    let path = dir.join(format!("{}.csv", t.name));
    let io = |e: csv::Error| CliError::Io(format!("{}: {}", path.display(), e));
    let mut w = csv::Writer::from_path(&path).map_err(io)?;
    w.write_record(&t.header).map_err(io)?;
    for r in &t.rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))
}

/// Writes `report.txt`, `summary.json` and one CSV per table into `dir`.
pub fn write_outputs(dir: &Path, o: &Outcome) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {}", dir.display(), e));
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join("report.txt"), render_report(o)).map_err(io)?;
    let js = serde_json::to_string_pretty(&summary_json(o)).expect("json values serialize");
    std::fs::write(dir.join("summary.json"), js + "\n").map_err(io)?;
    for t in &o.tables {
        write_csv(dir, t)?;
    }
    Ok(())
}

/// Records a failed run in `dir/summary.json`.
pub fn write_error(dir: &Path, command: &str, e: &CliError) -> Result<(), CliError> {
    let io = |err: std::io::Error| CliError::Io(format!("{}: {}", dir.display(), err));
    std::fs::create_dir_all(dir).map_err(io)?;
    let js = serde_json::to_string_pretty(&error_json(command, e)).expect("json values serialize");
    std::fs::write(dir.join("summary.json"), js + "\n").map_err(io)
}
