use core::f64::consts::PI;

use super::LinkGeometry;
use crate::geometry::{cell_distance, Direction};
use crate::math::sqrt;
use crate::ris::RisConfig;

/// Which side of a boundary a terminal is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldRegion {
    /// Closer than the boundary.
    Near,
    /// At or beyond the boundary.
    Far,
}

/// Near/far classification of a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRegionReport {
    /// `2 M N d_x d_y / λ` (the surface area stands in for `D²`).
    pub classic_boundary: f64,
    /// Distance at which the far-field and broadcast path losses meet.
    pub redefined_boundary: f64,
    /// `5λ`; closer than this the per-cell far-field assumption fails.
    pub lower_bound: f64,
    /// Transmitter side, against the redefined boundary.
    pub tx_region: FieldRegion,
    /// Receiver side, against the redefined boundary.
    pub rx_region: FieldRegion,
    /// Some cell is closer than 5λ to a terminal.
    pub below_lower_bound: bool,
}

/// `2 M N d_x d_y / λ`.
pub fn classic_boundary(cfg: &RisConfig) -> f64 {
    2.0 * cfg.cell_count() as f64 * cfg.pitch_x() * cfg.pitch_y() / cfg.wavelength()
}

/// `L = M N sqrt(G d_x d_y F(θt) F(θr) / 4π)`: the transmitter distance at
/// which the far-field and broadcast path losses coincide, for a receiver
/// much farther away.
pub fn redefined_boundary(cfg: &RisConfig, incident: Direction, observed: Direction) -> f64 {
    let p = cfg.cell_pattern();
    let ft = p.value(incident.elevation).unwrap_or(0.0);
    let fr = p.value(observed.elevation).unwrap_or(0.0);
    cfg.cell_count() as f64 * sqrt(cfg.cell_gain() * cfg.pitch_x() * cfg.pitch_y() * ft * fr / (4.0 * PI))
}

/// Exact transmitter distance where the two path losses are equal for a
/// receiver at `d2`: `L d₂ / (d₂ − L)` with `L` from [`redefined_boundary`].
/// `None` when `d2 ≤ L` (the curves never meet).
pub fn exact_crossover_distance(cfg: &RisConfig, incident: Direction, observed: Direction, d2: f64) -> Option<f64> {
    let l = redefined_boundary(cfg, incident, observed);
    (d2 > l).then(|| l * d2 / (d2 - l))
}

/// Boundaries and near/far classification for `link`.
pub fn field_region(cfg: &RisConfig, link: &LinkGeometry) -> FieldRegionReport {
    let l = redefined_boundary(cfg, link.tx.direction(), link.rx.direction());
    let lower = 5.0 * cfg.wavelength();
    let (tx, rx) = (link.tx_point(), link.rx_point());
    let below = cfg.cells().any(|(_, c)| cell_distance(tx, c) < lower || cell_distance(rx, c) < lower);
    let side = |d: f64| if d < l { FieldRegion::Near } else { FieldRegion::Far };
    FieldRegionReport {
        classic_boundary: classic_boundary(cfg),
        redefined_boundary: l,
        lower_bound: lower,
        tx_region: side(link.tx.distance()),
        rx_region: side(link.rx.distance()),
        below_lower_bound: below,
    }
}
