//! Verification reports: one row per checked claim, emitted as JSON, CSV or
//! an aligned text table. Numbers are always exact decimal strings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const REPORT_SCHEMA: u32 = 1;

const MAX_COLUMN: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub formula: String,
    pub params: String,
    pub closed_form: String,
    pub oracle_value: String,
    #[serde(rename = "match")]
    pub matched: bool,
    /// The row is a documented failure; it passes when `matched` is false.
    pub expected_fail: bool,
    pub anchor: String,
    pub micros: u64,
}

impl Row {
    pub fn new(
        formula: &str,
        params: impl Into<String>,
        closed_form: impl ToString,
        oracle_value: impl ToString,
        matched: bool,
        anchor: &str,
    ) -> Self {
        Row {
            formula: formula.to_string(),
            params: params.into(),
            closed_form: closed_form.to_string(),
            oracle_value: oracle_value.to_string(),
            matched,
            expected_fail: false,
            anchor: anchor.to_string(),
            micros: 0,
        }
    }

    /// Row comparing two values for equality.
    pub fn equality<T: ToString + PartialEq>(
        formula: &str,
        params: impl Into<String>,
        closed_form: T,
        oracle_value: T,
        anchor: &str,
    ) -> Self {
        let matched = closed_form == oracle_value;
        Row::new(formula, params, closed_form, oracle_value, matched, anchor)
    }

    pub fn expecting_failure(mut self) -> Self {
        self.expected_fail = true;
        self
    }

    pub fn with_micros(mut self, micros: u64) -> Self {
        self.micros = micros;
        self
    }

    /// True when the row behaves as documented.
    pub fn ok(&self) -> bool {
        self.matched != self.expected_fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(suite: &str, seed: u64) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            suite: suite.to_string(),
            seed,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = Row>) {
        self.rows.extend(rows);
    }

    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(Row::ok)
    }

    pub fn first_unexpected(&self) -> Option<&Row> {
        self.rows.iter().find(|r| !r.ok())
    }

    /// Sorts rows by (formula, params) so parallel runs emit identical output.
    pub fn canonical_sort(&mut self) {
        self.rows
            .sort_by(|a, b| (&a.formula, &a.params).cmp(&(&b.formula, &b.params)));
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_table(&self) -> String {
        let headers = ["formula", "params", "closed_form", "oracle_value", "match", "status"];
        let cells: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                let status = match (r.ok(), r.expected_fail) {
                    (true, true) => "expected-fail",
                    (true, false) => "ok",
                    (false, _) => "MISMATCH",
                };
                [
                    r.formula.clone(),
                    r.params.clone(),
                    r.closed_form.clone(),
                    r.oracle_value.clone(),
                    r.matched.to_string(),
                    status.to_string(),
                ]
            })
            .collect();
        // very long numbers overflow their column instead of widening it
        let mut widths = headers.map(str::len);
        for c in &cells {
            for (w, s) in widths.iter_mut().zip(c) {
                *w = (*w).max(s.chars().count().min(MAX_COLUMN));
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, fields: &[&str]| {
            for (i, (f, w)) in fields.iter().zip(&widths).enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                let _ = write!(out, "{f:<w$}");
            }
            out.truncate(out.trim_end_matches(' ').len());
            out.push('\n');
        };
        line(&mut out, &headers);
        for c in &cells {
            let refs: Vec<&str> = c.iter().map(String::as_str).collect();
            line(&mut out, &refs);
        }
        out
    }
}
