use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{LinkGeometry, PowerResult, Regime};
use crate::geometry::{mirror_image, virtual_transmitter, Direction, Point3};
use crate::math::acos;
use crate::radiation::Antenna;
use crate::ris::{stripe_beam_directions, RisConfig};

/// How a near-field surface spreads the incident wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BroadcastDesign {
    /// Uniform phases: a mirror.
    Specular,
    /// Phases that make the surface behave like a mirror lit from a virtual
    /// transmitter, broadcasting towards this direction.
    Steered(Direction),
    /// The four-column 0/π stripe: two beams, at the ±1 grating orders.
    TwoBeamStripe,
}

/// The (possibly virtual) transmitters the surface appears to reflect, each
/// with the point its antenna is aimed at.
pub fn broadcast_sources(cfg: &RisConfig, link: &LinkGeometry, design: BroadcastDesign) -> Vec<(Point3, Point3)> {
    let steered = |d: Direction| (virtual_transmitter(link.tx.distance(), d), Point3::ORIGIN);
    match design {
        BroadcastDesign::Specular => vec![(link.tx_point(), link.tx_boresight)],
        BroadcastDesign::Steered(desired) => vec![steered(desired)],
        BroadcastDesign::TwoBeamStripe => {
            stripe_beam_directions(cfg, link.tx.direction()).into_iter().map(steered).collect()
        }
    }
}

/// `true` when direction `rx_direction` leaves the surface inside both the
/// cone from the mirrored source through the surface rectangle and the
/// mirrored antenna's main lobe.
pub fn broadcast_coverage_test(
    cfg: &RisConfig,
    source: Point3,
    boresight_target: Point3,
    antenna: &Antenna,
    rx_direction: Direction,
) -> bool {
    let image = mirror_image(source);
    let u = rx_direction.unit_vector();
    if u.z.is_nan() || image.z.is_nan() || u.z <= 0.0 || image.z >= 0.0 {
        return false;
    }
    // Ray from the image, along u, crossing z = 0.
    let t = -image.z / u.z;
    let hit = image + u * t;
    let inside = hit.x.abs() <= 0.5 * cfg.width() && hit.y.abs() <= 0.5 * cfg.height();
    if !inside {
        return false;
    }
    let axis = mirror_image(boresight_target) - image;
    let n = axis.norm();
    if n == 0.0 {
        return false;
    }
    acos((axis.dot(u) / n).clamp(-1.0, 1.0)) <= antenna.main_lobe_half_width()
}

/// Geometric-optics broadcast power,
/// `P_r = P_t G_t G_r λ² A² / (16π² (d₁ + d₂)²)` inside the lit region and
/// zero outside it.
pub fn received_power_nearfield_broadcast(
    cfg: &RisConfig,
    link: &LinkGeometry,
    design: BroadcastDesign,
    p_t: f64,
) -> PowerResult {
    let covered = broadcast_sources(cfg, link, design)
        .into_iter()
        .any(|(source, target)| broadcast_coverage_test(cfg, source, target, &link.tx_antenna, link.rx.direction()));
    let p_r = if covered { p_t / pathloss_nearfield_broadcast(cfg, link) } else { 0.0 };
    let mut res = PowerResult::new(p_t, p_r, Regime::NearFieldBroadcast);
    res.in_coverage = covered;
    res.warnings.electrically_small = !cfg.is_electrically_large();
    res
}

/// `PL = 16π² (d₁ + d₂)² / (G_t G_r λ² A²)`; no dependence on the array size.
pub fn pathloss_nearfield_broadcast(cfg: &RisConfig, link: &LinkGeometry) -> f64 {
    let s = link.tx.distance() + link.rx.distance();
    let lam = cfg.wavelength();
    let a = cfg.amplitude();
    16.0 * PI * PI * (s * s) / (link.tx_antenna.gain() * link.rx_antenna.gain() * lam * lam * a * a)
}
