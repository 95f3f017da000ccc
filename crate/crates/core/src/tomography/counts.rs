//! Count records and their CSV/JSON file formats.
//!
//! CSV header: `setting,raw_counts,background,drift_normalizer`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::settings::MeasurementSetting;
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Coincidence counts for one setting together with its accidental background
/// estimate and drift normalizer (e.g. squared trigger singles).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CountRecord<T: Real> {
    pub setting: MeasurementSetting,
    pub raw_counts: u64,
    pub background: T,
    pub drift_normalizer: T,
}

impl<T: Real> CountRecord<T> {
    pub fn new(setting: MeasurementSetting, raw_counts: u64, background: T, drift_normalizer: T) -> Result<Self> {
        let rec = Self { setting, raw_counts, background, drift_normalizer };
        rec.validate()?;
        Ok(rec)
    }

    /// Counts with neither background nor drift correction.
    pub fn plain(setting: MeasurementSetting, raw_counts: u64) -> Self {
        Self { setting, raw_counts, background: T::zero(), drift_normalizer: T::one() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.drift_normalizer > T::zero()) || !self.drift_normalizer.is_finite() {
            return invalid(format!("{}: drift_normalizer must be positive", self.setting));
        }
        if !(self.background >= T::zero()) || !self.background.is_finite() {
            return invalid(format!("{}: background must be non-negative", self.setting));
        }
        Ok(())
    }

    /// `max(0, raw − background) / drift_normalizer`.
    pub fn corrected(&self) -> T {
        let raw = T::from_u64(self.raw_counts).unwrap();
        (raw - self.background).max(T::zero()) / self.drift_normalizer
    }
}

pub fn read_counts_csv<T: Real, R: Read>(reader: R) -> Result<Vec<CountRecord<T>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let want = ["setting", "raw_counts", "background", "drift_normalizer"];
    if headers.iter().collect::<Vec<_>>() != want {
        return invalid(format!("count table header must be `{}`", want.join(",")));
    }
    let mut out = Vec::new();
    for row in rdr.deserialize::<CountRecord<T>>() {
        let rec = row?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_counts_csv<T: Real, W: Write>(writer: W, records: &[CountRecord<T>]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

/// JSON form: an array of records with the same field names as the CSV columns.
pub fn read_counts_json<T: Real, R: Read>(reader: R) -> Result<Vec<CountRecord<T>>> {
    let records: Vec<CountRecord<T>> = serde_json::from_reader(reader)?;
    for r in &records {
        r.validate()?;
    }
    Ok(records)
}

pub fn write_counts_json<T: Real, W: Write>(writer: W, records: &[CountRecord<T>]) -> Result<()> {
    serde_json::to_writer_pretty(writer, records)?;
    Ok(())
}
