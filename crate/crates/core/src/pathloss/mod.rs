//! Received power and path loss of the reflected link.
//!
//! [`received_power_general`] sums the per-cell contributions coherently and
//! holds in every regime. The remaining functions are closed forms valid in
//! one regime each; none of them switches formula on its own, and
//! [`field_region`] tells the caller which one applies.

mod broadcast;
mod farfield;
mod general;
mod nearfield;
mod region;

pub use broadcast::{
    broadcast_coverage_test, broadcast_sources, pathloss_nearfield_broadcast, received_power_nearfield_broadcast,
    BroadcastDesign,
};
pub use farfield::{
    array_factor, array_factor_brute_force, pathloss_farfield_beam, received_power_farfield,
    received_power_farfield_max,
};
pub use general::{cell_diagnostics, received_power_general, CellDiagnostic, IlluminatedSurface};
pub use nearfield::{nearfield_beam_max, pathloss_nearfield_beam, received_power_nearfield_beam};
pub use region::{
    classic_boundary, exact_crossover_distance, field_region, redefined_boundary, FieldRegion, FieldRegionReport,
};

use crate::geometry::{Point3, SphericalPlacement};
use crate::radiation::{Antenna, AntennaSpec};

/// Which formula produced a [`PowerResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// Coherent per-cell summation.
    General,
    /// Far-field beamforming closed form.
    FarField,
    /// Near-field beamforming.
    NearFieldBeam,
    /// Near-field broadcasting closed form.
    NearFieldBroadcast,
}

impl Regime {
    /// All regimes.
    pub const ALL: [Regime; 4] = [Regime::General, Regime::FarField, Regime::NearFieldBeam, Regime::NearFieldBroadcast];

    /// Snake-case label used in output files.
    pub fn label(self) -> &'static str {
        match self {
            Regime::General => "general",
            Regime::FarField => "far_field",
            Regime::NearFieldBeam => "near_field_beam",
            Regime::NearFieldBroadcast => "near_field_broadcast",
        }
    }

    /// Inverse of [`Regime::label`].
    pub fn from_label(s: &str) -> Option<Regime> {
        Regime::ALL.into_iter().find(|r| r.label() == s)
    }
}

/// Transmitter and receiver placements relative to the surface centre, plus
/// their antennas. Both antennas aim at the surface centre unless the
/// boresight targets are changed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    /// Transmitter placement (`d₁, θ_t, φ_t`).
    pub tx: SphericalPlacement,
    /// Receiver placement (`d₂, θ_r, φ_r`).
    pub rx: SphericalPlacement,
    /// Transmit antenna.
    pub tx_antenna: Antenna,
    /// Receive antenna.
    pub rx_antenna: Antenna,
    /// Transmit boresight target.
    pub tx_boresight: Point3,
    /// Receive boresight target.
    pub rx_boresight: Point3,
}

impl LinkGeometry {
    /// Both antennas aimed at the surface centre.
    pub fn new(tx: SphericalPlacement, rx: SphericalPlacement, tx_antenna: Antenna, rx_antenna: Antenna) -> Self {
        Self { tx, rx, tx_antenna, rx_antenna, tx_boresight: Point3::ORIGIN, rx_boresight: Point3::ORIGIN }
    }

    /// Transmitter position.
    pub fn tx_point(&self) -> Point3 {
        self.tx.to_point()
    }

    /// Receiver position.
    pub fn rx_point(&self) -> Point3 {
        self.rx.to_point()
    }

    /// Placed transmit antenna.
    pub fn tx_spec(&self) -> AntennaSpec {
        AntennaSpec::new(self.tx_antenna, self.tx_point(), self.tx_boresight)
    }

    /// Placed receive antenna.
    pub fn rx_spec(&self) -> AntennaSpec {
        AntennaSpec::new(self.rx_antenna, self.rx_point(), self.rx_boresight)
    }

    /// Transmitter and receiver roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            tx: self.rx,
            rx: self.tx,
            tx_antenna: self.rx_antenna,
            rx_antenna: self.tx_antenna,
            tx_boresight: self.rx_boresight,
            rx_boresight: self.tx_boresight,
        }
    }

    /// Same link with the receiver moved.
    pub fn with_rx(&self, rx: SphericalPlacement) -> Self {
        Self { rx, ..*self }
    }

    /// Same link with the transmitter moved.
    pub fn with_tx(&self, tx: SphericalPlacement) -> Self {
        Self { tx, ..*self }
    }
}

/// Non-fatal validity flags attached to a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Warnings {
    /// A terminal sits closer than 5λ to some cell.
    pub below_lower_bound: bool,
    /// The broadcast formula was applied to a surface under 10λ on a side.
    pub electrically_small: bool,
}

/// Received power for one link evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerResult {
    /// Received power (W).
    pub received_power: f64,
    /// `P_t / P_r`, linear; infinite when nothing is received.
    pub path_loss: f64,
    /// Formula used.
    pub regime: Regime,
    /// Broadcast only: receiver inside the lit region. Always `true` for
    /// the other regimes.
    pub in_coverage: bool,
    /// Validity flags.
    pub warnings: Warnings,
}

impl PowerResult {
    pub(crate) fn new(transmit_power: f64, received_power: f64, regime: Regime) -> Self {
        let path_loss = if received_power > 0.0 { transmit_power / received_power } else { f64::INFINITY };
        Self { received_power, path_loss, regime, in_coverage: true, warnings: Warnings::default() }
    }
}

/// `64 π³`, the denominator shared by the beamforming formulas.
pub(crate) const SIXTY_FOUR_PI_CUBED: f64 =
    64.0 * core::f64::consts::PI * core::f64::consts::PI * core::f64::consts::PI;
