//! Deterministic JSON and CSV writers.
//!
//! Floats use the shortest representation that round-trips; lines end in LF.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, Result};

pub const TOOL: &str = "heatrace";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
}

impl Meta {
    pub fn new(config_sha256: String) -> Self {
        Meta { tool: TOOL, version: VERSION, config_sha256 }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    meta: &'a Meta,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with the meta block first and a trailing newline.
pub fn json<T: Serialize>(meta: &Meta, body: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Document { meta, body })
        .map_err(|e| CliError::Config(format!("cannot serialize output: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn float(x: f64) -> String {
    if x.is_finite() {
        // `{:?}` keeps a decimal point on integral values, `{}` does not
        format!("{x:?}")
    } else {
        x.to_string()
    }
}

/// CSV with `#` comment lines carrying the meta block.
pub struct Csv {
    comments: Vec<String>,
    header: String,
    rows: Vec<String>,
}

impl Csv {
    pub fn new(meta: &Meta, header: &[&str]) -> Self {
        Csv {
            comments: vec![
                format!("tool={} version={}", meta.tool, meta.version),
                format!("config_sha256={}", meta.config_sha256),
            ],
            header: header.join(","),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: String) {
        self.comments.push(line);
    }

    pub fn row(&mut self, cells: &[String]) {
        self.rows.push(cells.join(","));
    }

    pub fn finish(self) -> String {
        let mut text = String::new();
        for c in &self.comments {
            text.push_str("# ");
            text.push_str(c);
            text.push('\n');
        }
        text.push_str(&self.header);
        text.push('\n');
        for r in &self.rows {
            text.push_str(r);
            text.push('\n');
        }
        text
    }
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}
