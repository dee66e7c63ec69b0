use super::general::IlluminatedSurface;
use super::{LinkGeometry, PowerResult, Regime};
use crate::error::Result;
use crate::ris::{uniform_profile, PhaseProfile, RisConfig};

/// Near-field beamforming with an arbitrary phase profile and the
/// surface's uniform amplitude `A`:
/// `P_r = P_t G_t G_r G d_x d_y λ² A² / (64π³) · |Σ sqrt(F^combine) e^{−j(k(r^t+r^r) − φ)} / (r^t r^r)|²`.
pub fn received_power_nearfield_beam(
    cfg: &RisConfig,
    profile: &PhaseProfile,
    link: &LinkGeometry,
    p_t: f64,
) -> Result<PowerResult> {
    let surface = IlluminatedSurface::with_uniform_amplitude(cfg, profile, &link.tx_spec())?;
    let mut res = surface.received_power(&link.rx_spec(), p_t)?;
    res.regime = Regime::NearFieldBeam;
    Ok(res)
}

/// Upper bound reached by the focusing design: every summand in phase,
/// `P_r = P_t G_t G_r G d_x d_y λ² A² / (64π³) · (Σ sqrt(F^combine) / (r^t r^r))²`.
pub fn nearfield_beam_max(cfg: &RisConfig, link: &LinkGeometry, p_t: f64) -> Result<PowerResult> {
    let flat = uniform_profile(cfg, 0.0);
    let surface = IlluminatedSurface::with_uniform_amplitude(cfg, &flat, &link.tx_spec())?;
    let rx = link.rx_spec();
    let s = surface.magnitude_sum(&rx)?;
    let p_r = p_t * surface.prefactor() * rx.antenna.gain() * s * s;
    let mut res = PowerResult::new(p_t, p_r, Regime::NearFieldBeam);
    res.warnings.below_lower_bound = {
        let (_, min_r) = surface.field_sum(&rx)?;
        surface.below_lower_bound(min_r)
    };
    Ok(res)
}

/// `PL = 64π³ / (G_t G_r G d_x d_y λ² A² (Σ sqrt(F^combine) / (r^t r^r))²)`.
/// Independent of the phase profile: it is the loss at the focusing optimum.
pub fn pathloss_nearfield_beam(cfg: &RisConfig, link: &LinkGeometry) -> Result<f64> {
    Ok(nearfield_beam_max(cfg, link, 1.0)?.path_loss)
}
