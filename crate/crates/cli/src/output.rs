//! CSV and JSON writers for result rows.

use std::io::Write;

use ddf_core::{SchemeId, SchemeResult};
use serde::Serialize;
use serde_json::{json, Value};

pub const CSV_HEADER: [&str; 10] = [
    "snr_db",
    "scheme",
    "beta",
    "ber_sim",
    "ci95_low",
    "ci95_high",
    "ber_analytic",
    "ber_asymptotic",
    "bit_errors",
    "bits",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One output row. Missing values are written as empty CSV fields or JSON nulls.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub snr_db: f64,
    pub scheme: SchemeId,
    pub beta: Option<f64>,
    pub ber_sim: Option<f64>,
    pub ci95_low: Option<f64>,
    pub ci95_high: Option<f64>,
    pub ber_analytic: Option<f64>,
    pub ber_asymptotic: Option<f64>,
    pub bit_errors: Option<u64>,
    pub bits: Option<u64>,
}

impl Record {
    pub fn analytic(
        snr_db: f64,
        scheme: SchemeId,
        beta: Option<f64>,
        aber: f64,
        asym: Option<f64>,
    ) -> Self {
        Self {
            snr_db,
            scheme,
            beta,
            ber_sim: None,
            ci95_low: None,
            ci95_high: None,
            ber_analytic: Some(aber),
            ber_asymptotic: asym,
            bit_errors: None,
            bits: None,
        }
    }

    pub fn simulated(snr_db: f64, r: &SchemeResult) -> Self {
        let e = &r.estimate;
        Self {
            snr_db,
            scheme: e.scheme,
            beta: r.beta,
            ber_sim: Some(e.ber),
            ci95_low: Some(e.ci95_low),
            ci95_high: Some(e.ci95_high),
            ber_analytic: r.analytic,
            ber_asymptotic: r.asymptotic,
            bit_errors: Some(e.bit_errors),
            bits: Some(e.bits),
        }
    }

    fn fields(&self) -> [String; 10] {
        fn real(x: Option<f64>) -> String {
            x.map_or_else(String::new, |v| format!("{v:?}"))
        }
        fn int(x: Option<u64>) -> String {
            x.map_or_else(String::new, |v| v.to_string())
        }
        [
            format!("{:?}", self.snr_db),
            self.scheme.to_string(),
            real(self.beta),
            real(self.ber_sim),
            real(self.ci95_low),
            real(self.ci95_high),
            real(self.ber_analytic),
            real(self.ber_asymptotic),
            int(self.bit_errors),
            int(self.bits),
        ]
    }
}

pub fn write_csv<W: Write>(out: W, records: &[Record]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(
    mut out: W,
    metadata: Value,
    records: &[Record],
) -> std::io::Result<()> {
    let doc = json!({ "metadata": metadata, "records": records });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}
