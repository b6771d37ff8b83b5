//! Output files and the run manifest written next to them.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::Args;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Version of the JSON and CSV layouts, recorded in every manifest.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutArgs {
    /// Output prefix. Writes `<out>.json`, one or more `<out>*.csv` and
    /// `<out>.manifest.json`. Without it the primary result goes to stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// A CSV table with a documented column list.
pub struct Table {
    /// Appended to the prefix, e.g. `.csv` or `.intervals.csv`.
    pub suffix: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(suffix: &'static str, columns: &[S]) -> Self {
        Self {
            suffix,
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Encode(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Encode(e.to_string()))
    }
}

/// Which artifact is printed when no prefix is given.
pub enum Stdout {
    Json,
    FirstTable,
}

pub struct Report {
    pub json: serde_json::Value,
    pub tables: Vec<Table>,
    pub stdout: Stdout,
    /// Master seed actually used, after config files and defaults.
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(json: impl Serialize, tables: Vec<Table>) -> CliResult<Self> {
        Ok(Self {
            json: serde_json::to_value(json)?,
            tables,
            stdout: Stdout::Json,
            seed: None,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

#[derive(Serialize)]
struct TableSchema<'a> {
    path: String,
    columns: &'a [String],
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    tool: &'static str,
    tool_version: &'static str,
    subcommand: &'a str,
    parameters: &'a serde_json::Value,
    seed: Option<u64>,
    jobs: usize,
    json: String,
    tables: Vec<TableSchema<'a>>,
    started_unix_ms: u128,
    elapsed_ms: u128,
}

/// Everything needed to write one run's outputs.
pub struct RunInfo<'a> {
    pub subcommand: &'a str,
    pub parameters: serde_json::Value,
    pub started: (SystemTime, Instant),
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn pretty(value: &impl Serialize) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn emit(report: &Report, out: &OutArgs, info: RunInfo<'_>) -> CliResult<()> {
    let Some(prefix) = &out.out else {
        let text = match report.stdout {
            Stdout::Json => pretty(&report.json)?,
            Stdout::FirstTable => match report.tables.first() {
                Some(t) => t.render()?,
                None => pretty(&report.json)?,
            },
        };
        print!("{text}");
        return Ok(());
    };

    let json_path = with_suffix(prefix, ".json");
    write(&json_path, &pretty(&report.json)?)?;
    let mut schemas = Vec::new();
    for table in &report.tables {
        let path = with_suffix(prefix, table.suffix);
        write(&path, &table.render()?)?;
        schemas.push(TableSchema {
            path: path.display().to_string(),
            columns: &table.columns,
        });
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME"),
        tool_version: env!("CARGO_PKG_VERSION"),
        subcommand: info.subcommand,
        parameters: &info.parameters,
        seed: report.seed,
        jobs: rayon::current_num_threads(),
        json: json_path.display().to_string(),
        tables: schemas,
        started_unix_ms: info
            .started
            .0
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0),
        elapsed_ms: info.started.1.elapsed().as_millis(),
    };
    write(&with_suffix(prefix, ".manifest.json"), &pretty(&manifest)?)
}

/// Shortest round-trip rendering of a float, `NaN` and `inf` spelled out.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_render_with_header() {
        let mut t = Table::new(".csv", &["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.render().unwrap(), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn suffix_is_appended() {
        assert_eq!(
            with_suffix(Path::new("out/run.v1"), ".csv"),
            PathBuf::from("out/run.v1.csv")
        );
    }
}
