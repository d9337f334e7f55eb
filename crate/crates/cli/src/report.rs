//! Report rendering. JSON is canonical; CSV flattens the per-result rows.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use tamecut::fourier::{Method, NormCertificate};

pub const REPORT_VERSION: u32 = 1;

/// One flattened result for CSV output.
#[derive(Clone, Debug)]
pub struct Row {
    pub params: Vec<(&'static str, String)>,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: String,
}

impl Row {
    pub fn from_cert(params: Vec<(&'static str, String)>, cert: &NormCertificate) -> Self {
        Self { params, value: cert.value(), lower: cert.lower, upper: cert.upper, method: method_tag(cert.method) }
    }

    pub fn exact(params: Vec<(&'static str, String)>, value: f64, method: &str) -> Self {
        Self { params, value, lower: value, upper: value, method: method.to_string() }
    }
}

pub fn method_tag(m: Method) -> String {
    match serde_json::to_value(m) {
        Ok(Value::String(s)) => s,
        _ => format!("{m:?}"),
    }
}

#[derive(Serialize)]
struct Report<'a> {
    report_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
    seed: u64,
    config: &'a BTreeMap<String, Value>,
    result: &'a Value,
}

pub struct Rendered<'a> {
    pub command: &'a str,
    pub status: &'a str,
    pub error: Option<&'a str>,
    pub seed: u64,
    pub config: &'a BTreeMap<String, Value>,
    pub result: &'a Value,
    pub rows: &'a [Row],
}

impl Rendered<'_> {
    pub fn json(&self) -> String {
        let report = Report {
            report_version: REPORT_VERSION,
            tool: "tamecut",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            status: self.status,
            error: self.error,
            seed: self.seed,
            config: self.config,
            result: self.result,
        };
        let mut s = serde_json::to_string_pretty(&report).expect("report serialises");
        s.push('\n');
        s
    }

    /// Columns: command, the row parameters, value, lower, upper, method, seed.
    pub fn csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let names: Vec<&str> = self.rows.first().map(|r| r.params.iter().map(|p| p.0).collect()).unwrap_or_default();
        let mut header = vec!["command"];
        header.extend(&names);
        header.extend(["value", "lower", "upper", "method", "seed"]);
        w.write_record(&header)?;
        for row in self.rows {
            let mut rec = vec![self.command.to_string()];
            rec.extend(row.params.iter().map(|p| p.1.clone()));
            rec.extend([
                row.value.to_string(),
                row.lower.to_string(),
                row.upper.to_string(),
                row.method.clone(),
                self.seed.to_string(),
            ]);
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}
