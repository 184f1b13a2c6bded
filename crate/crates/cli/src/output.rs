//! CSV and JSON rendering of traces and scans.

use clap::ValueEnum;
use itf_core::scan::ScanRow;
use itf_core::{InterferenceTrace, TraceRecord};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub enum Table {
    Trace(Vec<TraceRecord>),
    Scan(Vec<ScanRow>),
}

impl From<InterferenceTrace> for Table {
    fn from(t: InterferenceTrace) -> Self {
        Table::Trace(t.records)
    }
}

impl From<Vec<ScanRow>> for Table {
    fn from(rows: Vec<ScanRow>) -> Self {
        Table::Scan(rows)
    }
}

/// Twelve significant digits in positional notation.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.11}", if x == 0.0 { 0.0 } else { x });
    }
    // the exponent after rounding to 12 digits decides the decimal count
    let sci = format!("{x:.11e}");
    let exponent: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    let decimals = (11 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => {
                let json = match self {
                    Table::Trace(r) => serde_json::to_string_pretty(r),
                    Table::Scan(r) => serde_json::to_string_pretty(r),
                };
                json.expect("records serialize") + "\n"
            }
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let written = match self {
            Table::Trace(records) => std::iter::once(w.write_record(["step", "label", "interference", "ibits"]))
                .chain(records.iter().map(|r| {
                    w.write_record([
                        r.step.to_string(),
                        r.label.clone(),
                        format_sig(r.interference),
                        format_sig(r.ibits),
                    ])
                }))
                .collect::<Result<(), _>>(),
            Table::Scan(rows) => std::iter::once(w.write_record(["param1", "param2", "interference"]))
                .chain(rows.iter().map(|r| {
                    w.write_record([format_sig(r.param1), format_sig(r.param2), format_sig(r.interference)])
                }))
                .collect::<Result<(), _>>(),
        };
        written.expect("writing to memory");
        String::from_utf8(w.into_inner().expect("in-memory buffer")).expect("CSV is UTF-8")
    }
}
