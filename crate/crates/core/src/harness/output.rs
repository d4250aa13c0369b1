// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

impl Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Parameters an output was produced with, written as `# key=value` lines
/// ahead of CSV data and as a `provenance` object in JSON.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Provenance(BTreeMap<String, String>);

impl Provenance {
    pub fn new(kind: &str) -> Self {
        let mut p = Self::default();
        p.set("output", kind);
        p.set("generator", concat!("citenet ", env!("CARGO_PKG_VERSION")));
        p
    }

    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    /// Joins a list with `;` so the value stays a single CSV-safe token.
    pub fn set_list<T: Display>(&mut self, key: &str, values: &[T]) -> &mut Self {
        let joined = values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";");
        self.set(key, joined)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn header(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.0 {
            let _ = writeln!(out, "# {k}={v}");
        }
        out
    }
}

/// `NA` for a missing value.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub(crate) fn csv_document(prov: &Provenance, header: &str, rows: &[String]) -> String {
    let mut out = prov.header();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonDocument<'a, T: Serialize> {
    provenance: &'a Provenance,
    rows: &'a [T],
}

pub(crate) fn json_document<T: Serialize>(
    prov: &Provenance,
    rows: &[T],
) -> Result<String, serde_json::Error> {
    let mut s = serde_json::to_string_pretty(&JsonDocument {
        provenance: prov,
        rows,
    })?;
    s.push('\n');
    Ok(s)
}
