//! Verification reports and their JSON/CSV forms.

use std::io::Write;
use std::path::Path;

use r2pencil_core::algebra::Scalar;
use serde::{Deserialize, Serialize};

/// A complex value as text: exact `p/q` rationals or shortest round-trip
/// decimals, depending on the backend that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexText {
    pub re: String,
    pub im: String,
}

impl ComplexText {
    pub fn of<S: Scalar>(x: &S) -> Self {
        let (re, im) = x.to_text();
        Self { re, im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub value: ComplexText,
}

impl Witness {
    pub fn new<S: Scalar>(label: impl Into<String>, value: &S) -> Self {
        Self {
            label: label.into(),
            value: ComplexText::of(value),
        }
    }
}

/// One checked cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub suite: String,
    pub instance: String,
    pub backend: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    /// Distinguishes several checks sharing `(suite, n, m)`.
    pub label: Option<String>,
    /// `None` when the check could not be evaluated.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// Diagnostic entries are reported but do not decide the overall status.
    pub gating: bool,
    pub error: Option<String>,
    pub witnesses: Vec<Witness>,
}

impl Entry {
    fn sort_key(&self) -> (&str, &str, &str, Option<usize>, Option<usize>, Option<&str>) {
        (
            &self.suite,
            &self.instance,
            &self.backend,
            self.n,
            self.m,
            self.label.as_deref(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsText {
    pub alpha: Vec<ComplexText>,
    pub beta: Vec<ComplexText>,
    pub e: Vec<ComplexText>,
    pub d: Vec<ComplexText>,
    pub c: Vec<ComplexText>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub id: String,
    pub seed: u64,
    pub n: usize,
    pub params: ParamsText,
    pub moments: Option<[ComplexText; 2]>,
    pub z_hat: Option<ComplexText>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance: InstanceSummary,
    pub backend: String,
    /// Depth actually used per backend after caps.
    pub depth_exact: Option<usize>,
    pub depth_float: Option<usize>,
    pub entries: Vec<Entry>,
    pub pass: bool,
}

impl VerificationReport {
    /// Sorts entries canonically and recomputes the overall status.
    pub fn finalize(&mut self) {
        self.entries.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self.pass = self.entries.iter().filter(|e| e.gating).all(|e| e.pass);
    }

    pub fn suite<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.suite == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.gating && !e.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// One CSV line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub suite: String,
    pub instance: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

/// CSV projection: the check label joins the suite name and the backend
/// joins the instance id, so rows stay unique.
pub fn csv_rows(report: &VerificationReport) -> Vec<CsvRow> {
    report
        .entries
        .iter()
        .map(|e| CsvRow {
            suite: match &e.label {
                Some(l) => format!("{}/{}", e.suite, l),
                None => e.suite.clone(),
            },
            instance: format!("{}/{}", e.instance, e.backend),
            n: e.n,
            m: e.m,
            residual: e.residual,
            tolerance: e.tolerance,
            pass: e.pass,
        })
        .collect()
}

pub fn to_json(report: &VerificationReport) -> Result<String, ReportError> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv(report: &VerificationReport) -> Result<String, ReportError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["suite", "instance", "n", "m", "residual", "tolerance", "pass"])?;
    for row in csv_rows(report) {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>, ReportError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

pub fn read_json(text: &str) -> Result<VerificationReport, ReportError> {
    Ok(serde_json::from_str(text)?)
}

/// Writes `report` to `path`, or to stdout when `path` is `None`.
pub fn emit_report(report: &VerificationReport, format: Format, path: Option<&Path>) -> Result<(), ReportError> {
    let text = match format {
        Format::Json => to_json(report)?,
        Format::Csv => to_csv(report)?,
    };
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty() -> VerificationReport {
        let none = ParamsText {
            alpha: vec![],
            beta: vec![],
            e: vec![],
            d: vec![],
            c: vec![],
        };
        VerificationReport {
            instance: InstanceSummary {
                id: "x".into(),
                seed: 0,
                n: 0,
                params: none,
                moments: None,
                z_hat: None,
            },
            backend: "both".into(),
            depth_exact: None,
            depth_float: None,
            entries: vec![],
            pass: true,
        }
    }

    fn entry(suite: &str, n: usize, pass: bool, gating: bool) -> Entry {
        Entry {
            suite: suite.into(),
            instance: "x".into(),
            backend: "exact".into(),
            n: Some(n),
            m: None,
            label: None,
            residual: Some(if pass { 0.0 } else { 1.0 }),
            tolerance: 0.0,
            pass,
            gating,
            error: None,
            witnesses: vec![],
        }
    }

    #[test]
    fn empty_report_gives_header_only_csv() {
        assert_eq!(to_csv(&empty()).unwrap(), "suite,instance,n,m,residual,tolerance,pass\n");
        assert!(read_csv(&to_csv(&empty()).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn finalize_sorts_and_ignores_diagnostics() {
        let mut r = empty();
        r.entries = vec![entry("b", 2, true, true), entry("a", 1, false, false), entry("b", 1, true, true)];
        r.finalize();
        let order: Vec<_> = r.entries.iter().map(|e| (e.suite.as_str(), e.n)).collect();
        assert_eq!(order, vec![("a", Some(1)), ("b", Some(1)), ("b", Some(2))]);
        assert!(r.pass);
        r.entries.push(entry("c", 0, false, true));
        r.finalize();
        assert!(!r.pass);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn csv_round_trips_through_json() {
        let mut r = empty();
        r.entries = vec![entry("a", 1, true, true), entry("b", 3, false, true)];
        r.entries[1].label = Some("odd".into());
        r.entries[1].residual = None;
        let back = read_json(&to_json(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let rows = read_csv(&to_csv(&back).unwrap()).unwrap();
        assert_eq!(rows, csv_rows(&r));
        assert_eq!(rows[1].suite, "b/odd");
        assert_eq!(rows[1].instance, "x/exact");
    }
}
