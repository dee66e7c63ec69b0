//! Distance sweeps and angular heatmaps.

use rayon::prelude::*;

use rispl_core::math::{deg, to_deg};
use rispl_core::pathloss::IlluminatedSurface;
use rispl_core::{AntennaSpec, LinkGeometry, PowerResult, Regime, SphericalPlacement};

use crate::error::{Error, Result};
use crate::scenario::{Scenario, SweepMode, SweepSpec};

/// One evaluated point of a distance sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Transmitter distance (m).
    pub d1: f64,
    /// Receiver distance (m).
    pub d2: f64,
    /// Receiver elevation (rad).
    pub theta_r: f64,
    /// Receiver azimuth (rad).
    pub phi_r: f64,
    /// Formula evaluated.
    pub regime: Regime,
    /// The result, or why this point could not be evaluated.
    pub outcome: Result<PowerResult, String>,
}

/// Evaluates `link` under every regime in `regimes`, one row each. Failures
/// are recorded in the row rather than returned.
pub fn evaluate_point(scenario: &Scenario, link: &LinkGeometry, regimes: &[Regime]) -> Vec<SweepRow> {
    let profile = scenario.design.profile(&scenario.ris, link);
    regimes
        .iter()
        .map(|&regime| {
            let outcome = match &profile {
                Ok(p) => scenario.evaluate(regime, link, p).map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            };
            SweepRow {
                d1: link.tx.distance(),
                d2: link.rx.distance(),
                theta_r: link.rx.elevation(),
                phi_r: link.rx.azimuth(),
                regime,
                outcome,
            }
        })
        .collect()
}

/// Runs a distance sweep: one row per axis point per regime, in axis order.
pub fn run_distance_sweep(scenario: &Scenario, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let template = scenario.require_link()?;
    let vary_rx = match spec.mode {
        SweepMode::DistanceD2 { .. } => true,
        SweepMode::DistanceD1 { .. } => false,
        SweepMode::AngularHeatmap { .. } => {
            return Err(Error::Invalid("an angular heatmap is not a distance sweep".into()));
        }
    };
    let rows = spec
        .distances()
        .into_par_iter()
        .map(|d| {
            let link = if vary_rx {
                template.rx.with_distance(d).map(|rx| template.with_rx(rx))
            } else {
                template.tx.with_distance(d).map(|tx| template.with_tx(tx))
            };
            match link {
                Ok(link) => evaluate_point(scenario, &link, &spec.regimes),
                Err(e) => spec
                    .regimes
                    .iter()
                    .map(|&regime| SweepRow {
                        d1: if vary_rx { template.tx.distance() } else { d },
                        d2: if vary_rx { d } else { template.rx.distance() },
                        theta_r: template.rx.elevation(),
                        phi_r: template.rx.azimuth(),
                        regime,
                        outcome: Err(e.to_string()),
                    })
                    .collect(),
            }
        })
        .collect::<Vec<_>>();
    Ok(rows.into_iter().flatten().collect())
}

/// Received power over receiver directions at a fixed `d2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapGrid {
    /// Elevations (deg), ascending from 0 to 90.
    pub thetas_deg: Vec<f64>,
    /// Azimuths (deg), ascending from 0 below 360.
    pub phis_deg: Vec<f64>,
    /// Received power (W), row-major: `power[i * phis.len() + j]` is at
    /// `(thetas[i], phis[j])`.
    pub power: Vec<f64>,
}

impl HeatmapGrid {
    /// Power at grid point `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.power[i * self.phis_deg.len() + j]
    }

    /// `(θ, φ, P)` of the strongest cell; ties go to the first in row-major
    /// order.
    pub fn argmax(&self) -> (f64, f64, f64) {
        self.argmax_where(|_, _| true).expect("grid is never empty")
    }

    /// Strongest cell among those whose `(θ, φ)` (deg) satisfy `keep`.
    pub fn argmax_where(&self, keep: impl Fn(f64, f64) -> bool) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for (i, &t) in self.thetas_deg.iter().enumerate() {
            for (j, &p) in self.phis_deg.iter().enumerate() {
                if !keep(t, p) {
                    continue;
                }
                let v = self.at(i, j);
                if best.is_none_or(|b| v > b.2) {
                    best = Some((t, p, v));
                }
            }
        }
        best
    }
}

/// Evaluates the general formula over `θ_r ∈ [0°, 90°]`, `φ_r ∈ [0°, 360°)`
/// at `resolution_deg`, with the receiver at the link's `d2` and aimed at
/// the surface centre.
pub fn run_angular_heatmap(scenario: &Scenario, resolution_deg: f64) -> Result<HeatmapGrid> {
    if !(resolution_deg > 0.0 && resolution_deg <= 90.0) {
        return Err(Error::Invalid("heatmap resolution must be in (0°, 90°]".into()));
    }
    let link = scenario.require_link()?;
    let cfg = &scenario.ris;
    let profile = scenario.design.profile(cfg, link)?;
    let surface = IlluminatedSurface::new(cfg, &profile, &link.tx_spec())?;

    let n_theta = (90.0 / resolution_deg + 1e-9).floor() as usize + 1;
    let n_phi = (360.0 / resolution_deg - 1e-9).ceil() as usize;
    let thetas_deg: Vec<f64> = (0..n_theta).map(|i| i as f64 * resolution_deg).collect();
    let phis_deg: Vec<f64> = (0..n_phi).map(|j| j as f64 * resolution_deg).collect();
    let d2 = link.rx.distance();
    let (rx_antenna, p_t) = (link.rx_antenna, scenario.transmit_power);

    let rows: Vec<Vec<f64>> = thetas_deg
        .par_iter()
        .map(|&t| {
            phis_deg
                .iter()
                .map(|&p| {
                    let rx = SphericalPlacement::new(d2, deg(t), deg(p))?;
                    let spec = AntennaSpec::aimed_at_origin(rx_antenna, rx.to_point());
                    Ok(surface.received_power(&spec, p_t)?.received_power)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(HeatmapGrid { thetas_deg, phis_deg, power: rows.concat() })
}

/// Receiver direction of a sweep row, in degrees.
pub fn row_angles_deg(row: &SweepRow) -> (f64, f64) {
    (to_deg(row.theta_r), to_deg(row.phi_r))
}
