//! Scenario files, sweeps, heatmaps and measurement comparison on top of
//! [`rispl_core`]. The `rispl` binary wraps all of it.

pub mod error;
pub mod measure;
pub mod output;
pub mod profile_csv;
pub mod scenario;
pub mod sweep;

pub use error::{Error, Result};
pub use measure::{compare_measurements, parse_measurements, ComparisonReport, MeasurementRecord};
pub use scenario::{Calibration, CalibrationSpec, PhaseDesign, Scenario, SweepMode, SweepSpec};
pub use sweep::{run_angular_heatmap, run_distance_sweep, HeatmapGrid, SweepRow};
