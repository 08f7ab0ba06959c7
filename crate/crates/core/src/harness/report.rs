//! Per-instance records, ratio histograms and their CSV / JSON forms.

use std::path::Path;

use serde_json::{json, Value};

use crate::error::{FdtError, Result};
use crate::model::write_json;

/// Slack used when placing a value exactly on a bin edge.
const EDGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    pub id: String,
    pub lp_value: Option<f64>,
    /// Cheapest solution found by the tree (or by dives when no tree ran).
    pub best_cost: Option<f64>,
    pub factor: Option<f64>,
    pub ratio: Option<f64>,
    pub solutions: Option<usize>,
    /// Best cost over the dive seeds, for experiments that dive.
    pub dive_cost: Option<f64>,
    pub wall_ms: f64,
    pub error: Option<String>,
}

impl Record {
    pub fn failed(id: String, error: &FdtError, wall_ms: f64) -> Self {
        Record {
            id,
            wall_ms,
            error: Some(error.to_string()),
            ..Record::default()
        }
    }
}

/// Counts of values per bin; bin `i` holds `(upper[i-1], upper[i]]`, the last bin is overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub labels: Vec<String>,
    pub upper: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(edges: &[(&str, f64)], overflow: &str) -> Self {
        let mut labels: Vec<String> = edges.iter().map(|(l, _)| l.to_string()).collect();
        labels.push(overflow.to_string());
        Histogram {
            labels,
            upper: edges.iter().map(|e| e.1).collect(),
            counts: vec![0; edges.len() + 1],
        }
    }

    /// Ratio bins at 1, 10/9, 8/7, 6/5, 4/3 and 3/2.
    pub fn ratio_bins() -> Self {
        Histogram::new(&[
            ("<= 1", 1.0),
            ("<= 10/9", 10.0 / 9.0),
            ("<= 8/7", 8.0 / 7.0),
            ("<= 6/5", 6.0 / 5.0),
            ("<= 4/3", 4.0 / 3.0),
            ("<= 3/2", 1.5),
            ("<= 2", 2.0),
        ], "> 2")
    }

    /// Factor bins for cycle-and-paths points.
    pub fn factor_bins() -> Self {
        Histogram::new(&[
            ("< 1.08", 1.08 - 2.0 * EDGE_TOL),
            ("[1.08, 1.11]", 1.11),
            ("(1.11, 1.14]", 1.14),
            ("(1.14, 1.17]", 1.17),
            ("(1.17, 1.2]", 1.2),
        ], "> 1.2")
    }

    pub fn add(&mut self, value: f64) {
        let bin = self
            .upper
            .iter()
            .position(|u| value <= u + EDGE_TOL)
            .unwrap_or(self.upper.len());
        self.counts[bin] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.labels
                .iter()
                .zip(&self.counts)
                .map(|(l, c)| json!({"bin": l, "count": c}))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub records: Vec<Record>,
    pub histogram: Histogram,
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.9}")).unwrap_or_default()
}

impl ExperimentReport {
    /// Bins the histogram from each record's ratio, or its factor when there is no ratio.
    pub fn new(name: impl Into<String>, records: Vec<Record>, mut histogram: Histogram) -> Self {
        for r in &records {
            if let Some(v) = r.ratio.or(r.factor) {
                histogram.add(v);
            }
        }
        ExperimentReport {
            name: name.into(),
            records,
            histogram,
        }
    }

    pub fn errors(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.records.iter().filter_map(|r| r.ratio).reduce(f64::max)
    }

    pub fn max_factor(&self) -> Option<f64> {
        self.records.iter().filter_map(|r| r.factor).reduce(f64::max)
    }

    /// Share of records with a ratio at most `bound`.
    pub fn fraction_at_most(&self, bound: f64) -> f64 {
        let ratios: Vec<f64> = self.records.iter().filter_map(|r| r.ratio).collect();
        if ratios.is_empty() {
            return 0.0;
        }
        ratios.iter().filter(|r| **r <= bound + EDGE_TOL).count() as f64 / ratios.len() as f64
    }

    /// One row per record. Wall time is left out unless asked for, so reruns compare byte for byte.
    pub fn to_csv(&self, timing: bool) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["id", "lp_value", "best_cost", "factor", "ratio", "solutions", "dive_cost"];
        if timing {
            header.push("wall_ms");
        }
        header.push("error");
        let csv_err = |e: csv::Error| FdtError::Invariant(format!("csv: {e}"));
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.records {
            let mut row = vec![
                r.id.clone(),
                opt(r.lp_value),
                opt(r.best_cost),
                opt(r.factor),
                opt(r.ratio),
                r.solutions.map(|s| s.to_string()).unwrap_or_default(),
                opt(r.dive_cost),
            ];
            if timing {
                row.push(format!("{:.3}", r.wall_ms));
            }
            row.push(r.error.clone().unwrap_or_default());
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| FdtError::Invariant(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "experiment": self.name,
            "instances": self.records.len(),
            "errors": self.errors(),
            "max_ratio": self.max_ratio(),
            "max_factor": self.max_factor(),
            "at_most_4/3": self.fraction_at_most(4.0 / 3.0),
            "histogram": self.histogram.to_json(),
        })
    }

    /// Writes `<stem>.csv` and `<stem>.json`.
    pub fn save(&self, stem: impl AsRef<Path>, timing: bool) -> Result<()> {
        let stem = stem.as_ref();
        let csv_path = stem.with_extension("csv");
        std::fs::write(&csv_path, self.to_csv(timing)?).map_err(|e| FdtError::io(&csv_path, e))?;
        write_json(stem.with_extension("json"), &self.to_json())
    }

    /// Text table of the histogram.
    pub fn summary(&self) -> String {
        let mut out = format!("{}: {} instances, {} errors\n", self.name, self.records.len(), self.errors());
        for (l, c) in self.histogram.labels.iter().zip(&self.histogram.counts) {
            out.push_str(&format!("  {l:<14} {c}\n"));
        }
        if let Some(m) = self.max_ratio() {
            out.push_str(&format!("  max ratio {m:.6}\n"));
        }
        if let Some(m) = self.max_factor() {
            out.push_str(&format!("  max factor {m:.6}\n"));
        }
        out
    }
}
