//! Free-space path loss models for links assisted by a reconfigurable
//! intelligent surface (RIS).
//!
//! The surface lies in the x-y plane, centred on the origin, with `rows x cols`
//! unit cells. A transmitter illuminates it, every cell re-radiates the
//! incident field scaled by its complex reflection coefficient, and the
//! receiver collects the coherent sum. [`pathloss::received_power_general`]
//! evaluates that sum directly; the closed forms in [`pathloss`] cover the
//! far-field beamforming, near-field beamforming and near-field broadcasting
//! regimes.
//!
//! The crate is `no_std` and only needs `alloc`. IO, sweeps and the command
//! line live in the `rispl` crate.
#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]

extern crate alloc;

mod error;
pub mod geometry;
pub mod math;
pub mod pathloss;
pub mod presets;
pub mod radiation;
pub mod ris;

pub use error::{Error, Result};
pub use geometry::{CellIndex, Direction, Point3, SphericalPlacement};
pub use num_complex::Complex64;
pub use pathloss::{LinkGeometry, PowerResult, Regime};
pub use radiation::{Antenna, AntennaSpec, CosinePattern};
pub use ris::{PhaseProfile, RisConfig};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
