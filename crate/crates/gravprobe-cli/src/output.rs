//! Deterministic CSV and JSON emission.
//!
//! CSV dialect: comma separator, '.' decimal, scientific notation with 17
//! significant digits, LF endings, UTF-8; the first line is a '#' provenance
//! comment carrying the tool version and config hash. JSON mirrors carry the
//! same provenance in a header object. No timestamps anywhere: identical
//! config and seed give byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};

/// One output cell.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Number(f64),
    Integer(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Number(v) => format_float(*v),
            Cell::Integer(v) => v.to_string(),
            Cell::Text(s) => {
                if s.contains(',') || s.contains('"') || s.contains('\n') {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }
}

/// 17 significant digits, scientific.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
struct Provenance {
    tool: &'static str,
    version: &'static str,
    config_hash: String,
}

#[derive(Debug, Clone, Serialize)]
struct JsonDocument<'a> {
    provenance: Provenance,
    columns: &'a [String],
    rows: &'a [Vec<Cell>],
}

/// Write a table in the configured format; returns the file path.
pub fn write_table(config: &RunConfig, table: &Table) -> std::io::Result<PathBuf> {
    fs::create_dir_all(&config.out_dir)?;
    let provenance = Provenance {
        tool: "gravprobe",
        version: gravprobe::VERSION,
        config_hash: format!("{:016x}", config.hash()),
    };
    match config.format {
        OutputFormat::Csv => {
            let path = config.out_dir.join(format!("{}.csv", table.name));
            let mut body = format!(
                "# {} {} config={}\n",
                provenance.tool, provenance.version, provenance.config_hash
            );
            body.push_str(&table.columns.join(","));
            body.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                body.push_str(&cells.join(","));
                body.push('\n');
            }
            fs::write(&path, body)?;
            Ok(path)
        }
        OutputFormat::Json => {
            let path = config.out_dir.join(format!("{}.json", table.name));
            let doc = JsonDocument {
                provenance,
                columns: &table.columns,
                rows: &table.rows,
            };
            let mut body = serde_json::to_string_pretty(&doc).expect("serializable");
            body.push('\n');
            fs::write(&path, body)?;
            Ok(path)
        }
    }
}

/// Render validation records as a table.
pub fn records_table(name: &str, records: &[gravprobe::checks::CheckRecord]) -> Table {
    let mut table = Table::new(
        name,
        &[
            "check",
            "reference",
            "computed",
            "relative_error",
            "tolerance",
            "pass",
        ],
    );
    for r in records {
        table.push(vec![
            Cell::Text(r.name.clone()),
            Cell::Number(r.reference),
            Cell::Number(r.computed),
            Cell::Number(r.relative_error),
            Cell::Number(r.tolerance),
            Cell::Integer(r.pass as i64),
        ]);
    }
    table
}

/// Print the per-record pass/fail lines.
pub fn print_records(records: &[gravprobe::checks::CheckRecord]) {
    for r in records {
        println!(
            "[{}] {} (reference {}, computed {}, rel err {:.3e}, tol {:.3e})",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            format_float(r.reference),
            format_float(r.computed),
            r.relative_error,
            r.tolerance,
        );
    }
}

pub fn ensure_writable(dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(".gravprobe-write-probe");
    fs::write(&probe, b"ok")?;
    fs::remove_file(&probe)?;
    Ok(())
}
