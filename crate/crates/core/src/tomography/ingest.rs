use std::collections::HashSet;

use serde::Serialize;

use super::counts::CountRecord;
use super::settings::MeasurementSetting;
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Background-subtracted, drift-normalized counts.
///
/// `frequencies` sum to one: the reconstruction fits an overall scale, so only
/// relative counts matter. `total` keeps the absolute corrected count for the
/// Poisson likelihood.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct FrequencyTable<T: Real> {
    pub settings: Vec<MeasurementSetting>,
    pub corrected: Vec<T>,
    pub frequencies: Vec<T>,
    pub total: T,
}

pub fn ingest_counts<T: Real>(records: &[CountRecord<T>]) -> Result<FrequencyTable<T>> {
    if records.is_empty() {
        return invalid("no count records");
    }
    let mut seen = HashSet::with_capacity(records.len());
    for r in records {
        r.validate()?;
        if !seen.insert(&r.setting) {
            return invalid(format!("duplicate setting {}", r.setting));
        }
    }
    let corrected: Vec<T> = records.iter().map(CountRecord::corrected).collect();
    let total = corrected.iter().fold(T::zero(), |a, &b| a + b);
    if !(total > T::zero()) {
        return Err(Error::DegenerateData("all corrected counts are zero".into()));
    }
    Ok(FrequencyTable {
        settings: records.iter().map(|r| r.setting.clone()).collect(),
        frequencies: corrected.iter().map(|&c| c / total).collect(),
        corrected,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(s: &str, raw: u64, bg: f64, drift: f64) -> CountRecord<f64> {
        CountRecord::new(s.parse().unwrap(), raw, bg, drift).unwrap()
    }

    #[test]
    fn subtracts_clamps_and_normalizes() {
        let t = ingest_counts(&[rec("H", 100, 10.0, 1.0), rec("V", 5, 10.0, 1.0), rec("D", 60, 0.0, 2.0)]).unwrap();
        assert_eq!(t.corrected, vec![90.0, 0.0, 30.0]);
        assert_eq!(t.total, 120.0);
        assert_eq!(t.frequencies, vec![0.75, 0.0, 0.25]);
    }

    #[test]
    fn uniform_drift_leaves_frequencies() {
        let a = ingest_counts(&[rec("H", 100, 0.0, 1.0), rec("V", 50, 0.0, 1.0)]).unwrap();
        let b = ingest_counts(&[rec("H", 100, 0.0, 2.0), rec("V", 50, 0.0, 2.0)]).unwrap();
        assert_eq!(a.frequencies, b.frequencies);
    }

    #[test]
    fn errors() {
        assert!(matches!(ingest_counts::<f64>(&[]), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            ingest_counts(&[rec("H", 1, 0.0, 1.0), rec("H", 2, 0.0, 1.0)]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            ingest_counts(&[rec("H", 3, 5.0, 1.0), rec("V", 0, 0.0, 1.0)]),
            Err(Error::DegenerateData(_))
        ));
    }
}
