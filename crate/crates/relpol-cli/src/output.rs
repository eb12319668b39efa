//! Fixed-format serialization of sweep rows: CSV (UTF-8, LF, shortest
//! round-trip reals) and JSON. Byte-identical output for identical rows is
//! part of the contract.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::sweep::{Field, SweepRow};

/// Shortest decimal form that parses back to the same f64 (Rust's `{}`).
pub fn format_f64(x: f64) -> String {
    format!("{x}")
}

fn field_text(f: &Field) -> String {
    match f {
        Field::Num(x) => format_f64(*x),
        Field::Text(s) => (*s).to_string(),
        Field::Missing => String::new(),
    }
}

/// Render rows as CSV with a header. A single-scenario table uses that
/// scenario's columns; a mixed table (the combined Holevo output) uses the
/// union of columns in first-appearance order, with empty cells where a
/// column does not apply.
pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut columns: Vec<&'static str> = Vec::new();
    for row in rows {
        for (name, _) in row.fields() {
            if !columns.contains(&name) {
                columns.push(name);
            }
        }
    }
    let mut out = String::from("scenario");
    for c in &columns {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for row in rows {
        let fields = row.fields();
        out.push_str(row.scenario());
        for c in &columns {
            out.push(',');
            if let Some((_, f)) = fields.iter().find(|(n, _)| n == c) {
                out.push_str(&field_text(f));
            }
        }
        out.push('\n');
    }
    out
}

/// Render rows as a pretty-printed JSON array of tagged objects.
pub fn render_json(rows: &[SweepRow]) -> Result<String, String> {
    serde_json::to_string_pretty(rows)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| format!("JSON serialization: {e}"))
}

/// Resolve a configured output path: relative paths land under
/// RELPOL_OUT_DIR when that variable is set.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os("RELPOL_OUT_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

/// Write to the given file, or stdout when no path is configured.
pub fn write_text(text: &str, path: Option<&Path>) -> Result<(), String> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
        Some(p) => {
            let resolved = resolve_out_path(p);
            std::fs::write(&resolved, text)
                .map_err(|e| format!("cannot write {}: {e}", resolved.display()))
        }
    }
}
