//! Phase profiles as CSV matrices: one line per row `n` (ascending), one
//! column per `m` (ascending), radians to 9 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rispl_core::PhaseProfile;

use crate::error::{Error, Result};

/// Renders `profile` as CSV text.
pub fn format_profile(profile: &PhaseProfile) -> String {
    let mut out = String::new();
    for row in profile.phases().chunks(profile.cols()) {
        for (i, p) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{p:.8e}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses CSV text into a `rows x cols` profile. Phases are wrapped into
/// `[0, 2π)`; `#` lines are skipped.
pub fn parse_profile(text: &str, rows: usize, cols: usize, origin: &Path) -> Result<PhaseProfile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut phases = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse { path: origin.into(), msg: e.to_string() })?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |msg: String| Error::Record { path: origin.into(), line, msg };
        if rec.len() != cols {
            return Err(bad(format!("expected {cols} phases, found {}", rec.len())));
        }
        for field in rec.iter() {
            let v: f64 = field.parse().map_err(|_| bad(format!("`{field}` is not a number")))?;
            phases.push(v);
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::Parse { path: origin.into(), msg: format!("expected {rows} rows, found {seen}") });
    }
    PhaseProfile::new(rows, cols, phases).map_err(|e| Error::Parse { path: origin.into(), msg: e.to_string() })
}

/// Reads a profile file.
pub fn read_profile(path: &Path, rows: usize, cols: usize) -> Result<PhaseProfile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_profile(&text, rows, cols, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rispl_core::presets;
    use rispl_core::ris::nearfield_focus_codebook;
    use rispl_core::Point3;

    #[test]
    fn round_trip_keeps_nine_digits() {
        let cfg = presets::small_ris();
        let p = nearfield_focus_codebook(&cfg, Point3::new(-1.0, 0.2, 2.0), Point3::new(3.0, 0.0, 4.0));
        let text = format_profile(&p);
        assert_eq!(text.lines().count(), 8);
        let back = parse_profile(&text, 8, 32, Path::new("t.csv")).unwrap();
        for (a, b) in p.phases().iter().zip(back.phases()) {
            assert!((a - b).abs() <= 5e-9 * a.abs().max(1e-30) + 1e-300, "{a} {b}");
        }
        assert_eq!(format_profile(&back), text);
    }

    #[test]
    fn wraps_and_reports_lines() {
        let p = parse_profile("# header\n7.0,-1\n0,0\n", 2, 2, Path::new("t.csv")).unwrap();
        assert!((p.phases()[0] - (7.0 - std::f64::consts::TAU)).abs() < 1e-12);
        assert!((p.phases()[1] - (std::f64::consts::TAU - 1.0)).abs() < 1e-12);
        let err = parse_profile("0,0\n0,x\n", 2, 2, Path::new("t.csv")).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(parse_profile("0,0\n", 2, 2, Path::new("t.csv")).is_err());
        assert!(parse_profile("0,0,0\n0,0\n", 2, 2, Path::new("t.csv")).is_err());
    }
}
