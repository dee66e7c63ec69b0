//! CSV and JSON renderings. CSV is fixed-format so reruns are
//! byte-identical; JSON carries the same data with `null` for infinities.

use std::fmt::Write as _;

use serde_json::{json, Value};

use rispl_core::math::to_db;

use crate::measure::ComparisonReport;
use crate::sweep::{row_angles_deg, HeatmapGrid, SweepRow};

/// Header of sweep and single-point output.
pub const SWEEP_HEADER: &str = "d1_m,d2_m,theta_r_deg,phi_r_deg,regime,pr_dbm,pr_w,path_loss_db,in_coverage";

/// A dB value to six decimals, with `-inf` / `inf` spelled out.
pub fn fmt_db(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x:.6}")
    }
}

/// Watts to dBm.
pub fn dbm(watts: f64) -> f64 {
    to_db(watts / 1e-3)
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Sweep rows as CSV. Rows that could not be evaluated show `nan` power
/// and `error` in the coverage column.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let (t, p) = row_angles_deg(r);
        write!(out, "{:.6},{:.6},{t:.6},{p:.6},{},", r.d1, r.d2, r.regime.label()).unwrap();
        match &r.outcome {
            Ok(res) => writeln!(
                out,
                "{},{:.9e},{},{}",
                fmt_db(dbm(res.received_power)),
                res.received_power,
                fmt_db(to_db(res.path_loss)),
                res.in_coverage
            )
            .unwrap(),
            Err(_) => out.push_str("nan,nan,nan,error\n"),
        }
    }
    out
}

/// Sweep rows as a JSON array.
pub fn sweep_json(rows: &[SweepRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                let (t, p) = row_angles_deg(r);
                let mut v = json!({
                    "d1_m": r.d1, "d2_m": r.d2, "theta_r_deg": t, "phi_r_deg": p, "regime": r.regime.label(),
                });
                let o = v.as_object_mut().unwrap();
                match &r.outcome {
                    Ok(res) => {
                        o.insert("pr_w".into(), json!(res.received_power));
                        o.insert("pr_dbm".into(), finite_or_null(dbm(res.received_power)));
                        o.insert("path_loss_db".into(), finite_or_null(to_db(res.path_loss)));
                        o.insert("in_coverage".into(), json!(res.in_coverage));
                        o.insert(
                            "warnings".into(),
                            json!({
                                "below_lower_bound": res.warnings.below_lower_bound,
                                "electrically_small": res.warnings.electrically_small,
                            }),
                        );
                    }
                    Err(e) => {
                        o.insert("error".into(), json!(e));
                    }
                }
                v
            })
            .collect(),
    )
}

/// Heatmap as long-form CSV plus a trailing `# argmax` line.
pub fn heatmap_csv(grid: &HeatmapGrid) -> String {
    let mut out = String::from("theta_r_deg,phi_r_deg,pr_w,pr_dbm\n");
    for (i, t) in grid.thetas_deg.iter().enumerate() {
        for (j, p) in grid.phis_deg.iter().enumerate() {
            let w = grid.at(i, j);
            writeln!(out, "{t:.6},{p:.6},{w:.9e},{}", fmt_db(dbm(w))).unwrap();
        }
    }
    let (t, p, w) = grid.argmax();
    writeln!(out, "# argmax theta_r_deg={t:.6} phi_r_deg={p:.6} pr_w={w:.9e} pr_dbm={}", fmt_db(dbm(w))).unwrap();
    out
}

/// Heatmap as JSON: axes, a row-major dBm matrix and the argmax.
pub fn heatmap_json(grid: &HeatmapGrid) -> Value {
    let (t, p, w) = grid.argmax();
    let rows: Vec<Value> = grid
        .power
        .chunks(grid.phis_deg.len())
        .map(|row| Value::Array(row.iter().map(|&w| finite_or_null(dbm(w))).collect()))
        .collect();
    json!({
        "theta_r_deg": grid.thetas_deg,
        "phi_r_deg": grid.phis_deg,
        "pr_dbm": rows,
        "argmax": { "theta_r_deg": t, "phi_r_deg": p, "pr_w": w, "pr_dbm": finite_or_null(dbm(w)) },
    })
}

/// Comparison as CSV plus a trailing `# summary` line.
pub fn comparison_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("d1_m,d2_m,tag,measured_dbm,predicted_dbm,residual_db,outlier\n");
    for r in &report.rows {
        let tag = if r.record.tag.contains([',', '"', '\n']) {
            format!("\"{}\"", r.record.tag.replace('"', "\"\""))
        } else {
            r.record.tag.clone()
        };
        writeln!(
            out,
            "{:.6},{:.6},{tag},{},{},{},{}",
            r.record.d1,
            r.record.d2,
            fmt_db(r.record.received_power_dbm),
            fmt_db(r.predicted_dbm),
            fmt_db(r.residual_db),
            r.outlier
        )
        .unwrap();
    }
    writeln!(
        out,
        "# summary regime={} records={} mean_residual_db={} max_abs_residual_db={} outliers={} threshold_db={}",
        report.regime.label(),
        report.rows.len(),
        fmt_db(report.mean_residual_db),
        fmt_db(report.max_abs_residual_db),
        report.outliers(),
        fmt_db(report.outlier_threshold_db)
    )
    .unwrap();
    out
}

/// Comparison as JSON.
pub fn comparison_json(report: &ComparisonReport) -> Value {
    json!({
        "regime": report.regime.label(),
        "rows": report.rows.iter().map(|r| json!({
            "d1_m": r.record.d1,
            "d2_m": r.record.d2,
            "tag": r.record.tag,
            "measured_dbm": r.record.received_power_dbm,
            "predicted_dbm": finite_or_null(r.predicted_dbm),
            "residual_db": finite_or_null(r.residual_db),
            "outlier": r.outlier,
        })).collect::<Vec<_>>(),
        "mean_residual_db": finite_or_null(report.mean_residual_db),
        "max_abs_residual_db": finite_or_null(report.max_abs_residual_db),
        "outliers": report.outliers(),
        "outlier_threshold_db": report.outlier_threshold_db,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rispl_core::{PowerResult, Regime};

    #[test]
    fn db_formatting() {
        assert_eq!(fmt_db(-25.75), "-25.750000");
        assert_eq!(fmt_db(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_db(f64::INFINITY), "inf");
        assert_eq!(fmt_db(dbm(0.0)), "-inf");
    }

    #[test]
    fn flagged_rows_keep_the_header_shape() {
        let rows = vec![SweepRow {
            d1: 1.0,
            d2: 5.0,
            theta_r: 0.0,
            phi_r: 0.0,
            regime: Regime::FarField,
            outcome: Err::<PowerResult, _>("nope".into()),
        }];
        let csv = sweep_csv(&rows);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines[1], "1.000000,5.000000,0.000000,0.000000,far_field,nan,nan,nan,error");
        assert_eq!(sweep_json(&rows)[0]["error"], "nope");
    }
}
