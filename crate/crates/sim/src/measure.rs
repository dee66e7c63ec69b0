//! Measured received power against the model.

use std::fs;
use std::path::Path;

use rispl_core::math::to_db;
use rispl_core::Regime;

use crate::error::{Error, Result};
use crate::scenario::{CalibrationSpec, Scenario};

/// Header every measurement file must start with.
pub const MEASUREMENT_HEADER: [&str; 4] = ["d1_m", "d2_m", "pr_dbm", "tag"];

/// One measured point.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    /// Transmitter distance (m).
    pub d1: f64,
    /// Receiver distance (m).
    pub d2: f64,
    /// Measured received power (dBm).
    pub received_power_dbm: f64,
    /// Free-form scenario label.
    pub tag: String,
}

/// Parses a measurement CSV. `#` lines are ignored; every rejected record
/// is reported with its line number.
pub fn parse_measurements(text: &str, origin: &Path) -> Result<Vec<MeasurementRecord>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse { path: origin.into(), msg: e.to_string() })?;
    if header.iter().ne(MEASUREMENT_HEADER) {
        return Err(Error::Parse {
            path: origin.into(),
            msg: format!("header must be `{}`", MEASUREMENT_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| match e.position() {
            Some(p) => Error::Record { path: origin.into(), line: p.line(), msg: e.to_string() },
            None => Error::Parse { path: origin.into(), msg: e.to_string() },
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |msg: String| Error::Record { path: origin.into(), line, msg };
        let num = |i: usize| -> Result<f64> {
            let f = &rec[i];
            let v: f64 = f.parse().map_err(|_| bad(format!("{}: `{f}` is not a number", MEASUREMENT_HEADER[i])))?;
            if !v.is_finite() {
                return Err(bad(format!("{} must be finite", MEASUREMENT_HEADER[i])));
            }
            Ok(v)
        };
        let (d1, d2, p) = (num(0)?, num(1)?, num(2)?);
        if d1 <= 0.0 || d2 <= 0.0 {
            return Err(bad("distances must be positive".into()));
        }
        out.push(MeasurementRecord { d1, d2, received_power_dbm: p, tag: rec[3].to_string() });
    }
    if out.is_empty() {
        return Err(Error::Parse { path: origin.into(), msg: "no measurement records".into() });
    }
    Ok(out)
}

/// Reads a measurement file.
pub fn read_measurements(path: &Path) -> Result<Vec<MeasurementRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_measurements(&text, path)
}

/// Model prediction for one record.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    /// The measured point.
    pub record: MeasurementRecord,
    /// Calibrated model prediction (dBm); `-inf` outside broadcast coverage.
    pub predicted_dbm: f64,
    /// `measured − predicted` (dB).
    pub residual_db: f64,
    /// `|residual|` above the threshold.
    pub outlier: bool,
}

/// Residuals and their summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Formula the records were compared against.
    pub regime: Regime,
    /// One row per record, in input order.
    pub rows: Vec<ComparisonRow>,
    /// Mean of the signed residuals (dB).
    pub mean_residual_db: f64,
    /// Largest `|residual|` (dB).
    pub max_abs_residual_db: f64,
    /// Threshold used for outliers (dB).
    pub outlier_threshold_db: f64,
}

impl ComparisonReport {
    /// Number of flagged records.
    pub fn outliers(&self) -> usize {
        self.rows.iter().filter(|r| r.outlier).count()
    }
}

/// Calibrated prediction (dBm) at `(d1, d2)` with the scenario's link
/// angles and antennas.
pub fn predict_dbm(scenario: &Scenario, regime: Regime, d1: f64, d2: f64, cal: &CalibrationSpec) -> Result<f64> {
    let template = scenario.require_link()?;
    let link = template.with_tx(template.tx.with_distance(d1)?).with_rx(template.rx.with_distance(d2)?);
    let profile = scenario.design.profile(&scenario.ris, &link)?;
    let p = scenario.evaluate(regime, &link, &profile)?.received_power;
    Ok(to_db(p * cal.calibration.factor(&scenario.ris, &link) / 1e-3))
}

/// Compares `records` with the model under `regime`.
pub fn compare_measurements(
    records: &[MeasurementRecord],
    scenario: &Scenario,
    regime: Regime,
    cal: &CalibrationSpec,
) -> Result<ComparisonReport> {
    if records.is_empty() {
        return Err(Error::Invalid("no measurement records to compare".into()));
    }
    let rows = records
        .iter()
        .map(|r| {
            let predicted_dbm = predict_dbm(scenario, regime, r.d1, r.d2, cal)?;
            let residual_db = r.received_power_dbm - predicted_dbm;
            Ok(ComparisonRow {
                record: r.clone(),
                predicted_dbm,
                residual_db,
                outlier: residual_db.is_nan() || residual_db.abs() > cal.outlier_threshold_db,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mean_residual_db = rows.iter().map(|r| r.residual_db).sum::<f64>() / rows.len() as f64;
    let max_abs_residual_db = rows.iter().map(|r| r.residual_db.abs()).fold(0.0, f64::max);
    Ok(ComparisonReport {
        regime,
        rows,
        mean_residual_db,
        max_abs_residual_db,
        outlier_threshold_db: cal.outlier_threshold_db,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: &str = "m.csv";

    #[test]
    fn parses_with_comments() {
        let text = "# chamber run 3\nd1_m,d2_m,pr_dbm,tag\n1.0, 5.0, -30.5, a\n# gap\n2,10,-40,b c\n";
        let r = parse_measurements(text, Path::new(P)).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].tag, "b c");
        assert_eq!(r[0].received_power_dbm, -30.5);
    }

    #[test]
    fn rejections_carry_line_numbers() {
        let e = parse_measurements("d1_m,d2_m,pr_dbm,tag\n1,2,-3,a\n1,x,-3,a\n", Path::new(P)).unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_measurements("d1_m,d2_m,pr_dbm,tag\n1,2,-3,a\n-1,2,-3,a\n", Path::new(P)).unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_measurements("d1_m,d2_m,pr_dbm,tag\n1,2,-3\n", Path::new(P)).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_measurements("d1,d2,p,t\n1,2,3,a\n", Path::new(P)).is_err());
        assert!(parse_measurements("d1_m,d2_m,pr_dbm,tag\n", Path::new(P)).is_err());
        assert!(parse_measurements("d1_m,d2_m,pr_dbm,tag\n1,2,inf,a\n", Path::new(P)).is_err());
    }
}
