//! Command-line front-end. Every subcommand produces a report that embeds
//! the resolved run configuration, a version string and the truncation
//! parameters; identical configurations give byte-identical output.

mod commands;
pub mod config;

use serde::Serialize;
use serde_json::Value;

pub use commands::execute;
pub use config::{Cli, Command, Format, RunConfig};

pub const SCHEMA: &str = "polygas/1";
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (", env!("POLYGAS_GIT_DESCRIBE"), ")");

/// Rows for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// What a subcommand computed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub truncation: Value,
    pub result: Value,
    pub table: Option<Table>,
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    truncation: &'a Value,
    result: &'a Value,
}

/// Renders an outcome in the configured format.
pub fn render(cfg: &RunConfig, out: &Outcome) -> Result<String, String> {
    match cfg.format {
        Format::Json => {
            let r = Report {
                schema: SCHEMA,
                version: VERSION,
                config: cfg,
                truncation: &out.truncation,
                result: &out.result,
            };
            serde_json::to_string_pretty(&r)
                .map(|s| s + "\n")
                .map_err(|e| e.to_string())
        }
        Format::Csv => {
            let table = out.table.as_ref().ok_or("no table for this subcommand")?;
            let mut s = String::new();
            s += &format!("# schema: {SCHEMA}\n# version: {VERSION}\n");
            s += &format!("# config: {}\n", compact(cfg));
            s += &format!("# truncation: {}\n", compact(&out.truncation));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header).map_err(|e| e.to_string())?;
            for row in &table.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            s += &String::from_utf8(bytes).map_err(|e| e.to_string())?;
            Ok(s)
        }
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report values serialize")
}

/// Machine-readable error object.
pub fn error_report(code: &str, message: &str, detail: Value) -> String {
    let v = serde_json::json!({
        "schema": SCHEMA,
        "version": VERSION,
        "error": { "code": code, "message": message, "detail": detail },
    });
    serde_json::to_string_pretty(&v).expect("error objects serialize") + "\n"
}

/// Error object for a model error.
pub fn model_error_report(e: &polygas_core::Error) -> String {
    let detail = serde_json::to_value(e).map_or(Value::Null, |v| v["detail"].clone());
    error_report(e.code(), &e.to_string(), detail)
}
