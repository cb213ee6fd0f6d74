use std::fs;
use std::path::Path;

use crate::bounds::Regime;
use crate::error::{Error, Result};
use crate::format::g17;

pub const RESULTS_HEADER: [&str; 12] =
    ["axis", "value", "K", "T", "V", "W", "regime", "reps", "mean_regret", "std_regret", "ub", "lb"];

/// One line of the results CSV. `width` is the first window size.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub axis: String,
    pub value: f64,
    pub arms: usize,
    pub horizon: usize,
    pub budget: f64,
    pub width: usize,
    pub regime: Regime,
    pub reps: usize,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub ub: f64,
    pub lb: f64,
}

impl ResultRow {
    /// Numeric column by header name, for slope fits.
    pub fn column(&self, name: &str) -> Option<f64> {
        Some(match name {
            "value" => self.value,
            "K" => self.arms as f64,
            "T" => self.horizon as f64,
            "V" => self.budget,
            "W" => self.width as f64,
            "reps" => self.reps as f64,
            "mean_regret" => self.mean_regret,
            "std_regret" => self.std_regret,
            "ub" => self.ub,
            "lb" => self.lb,
            _ => return None,
        })
    }

    fn record(&self) -> [String; 12] {
        [
            self.axis.clone(),
            g17(self.value),
            self.arms.to_string(),
            self.horizon.to_string(),
            g17(self.budget),
            self.width.to_string(),
            self.regime.to_string(),
            self.reps.to_string(),
            g17(self.mean_regret),
            g17(self.std_regret),
            g17(self.ub),
            g17(self.lb),
        ]
    }
}

pub fn render_results(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_results(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_results(rows)?)?;
    Ok(())
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, idx: usize, line: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = &record[idx];
    raw.parse().map_err(|e| Error::Parse {
        line,
        message: format!("column {}: {raw:?}: {e}", RESULTS_HEADER[idx]),
    })
}

pub fn parse_results(text: &str) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().ne(RESULTS_HEADER) {
        let missing: Vec<&str> = RESULTS_HEADER.iter().copied().filter(|h| !headers.iter().any(|x| x == *h)).collect();
        return Err(Error::SchemaMismatch(format!(
            "expected header {:?}, got {:?} (missing {:?})",
            RESULTS_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(","),
            missing
        )));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        rows.push(ResultRow {
            axis: record[0].to_string(),
            value: field(&record, 1, line)?,
            arms: field(&record, 2, line)?,
            horizon: field(&record, 3, line)?,
            budget: field(&record, 4, line)?,
            width: field(&record, 5, line)?,
            regime: record[6].parse()?,
            reps: field(&record, 7, line)?,
            mean_regret: field(&record, 8, line)?,
            std_regret: field(&record, 9, line)?,
            ub: field(&record, 10, line)?,
            lb: field(&record, 11, line)?,
        });
    }
    Ok(rows)
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    parse_results(&fs::read_to_string(path)?)
}
