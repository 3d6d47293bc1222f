use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{MomentError, Result};

pub const REPORT_VERSION: u32 = 1;

/// One measurement. `flag` is empty, `timing` (value varies between runs)
/// or `unstable` (non-finite coefficients were produced).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub experiment: String,
    pub method: String,
    pub params: String,
    #[serde(rename = "K")]
    pub k: usize,
    /// Full scheme label, e.g. `incircle/up:3/recursive/strict`.
    pub strategy: String,
    pub metric: String,
    pub value: f64,
    pub flag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub rows: Vec<ReportRow>,
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Report {
    pub fn new() -> Report {
        Report {
            version: REPORT_VERSION,
            rows: Vec::new(),
        }
    }

    /// CSV with a header line. Values use the shortest exact decimal form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment,method,params,K,strategy,metric,value,flag\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{:?},{}",
                csv_field(&r.experiment),
                csv_field(&r.method),
                csv_field(&r.params),
                r.k,
                csv_field(&r.strategy),
                csv_field(&r.metric),
                r.value,
                csv_field(&r.flag)
            );
        }
        out
    }

    /// JSON; non-finite values are written as strings.
    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let value = if r.value.is_finite() {
                    serde_json::json!(r.value)
                } else {
                    serde_json::json!(format!("{:?}", r.value))
                };
                serde_json::json!({
                    "experiment": r.experiment,
                    "method": r.method,
                    "params": r.params,
                    "K": r.k,
                    "strategy": r.strategy,
                    "metric": r.metric,
                    "value": value,
                    "flag": r.flag,
                })
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "version": self.version, "rows": rows }))
            .map_err(|e| MomentError::Format(e.to_string()))
    }

    /// Writes JSON when the extension is `.json`, CSV otherwise.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            self.to_json()?
        } else {
            self.to_csv()
        };
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Rows with the given method label and metric, in order.
    pub fn select<'a>(&'a self, method: &'a str, metric: &'a str) -> impl Iterator<Item = &'a ReportRow> + 'a {
        self.rows.iter().filter(move |r| r.method == method && r.metric == metric)
    }
}
