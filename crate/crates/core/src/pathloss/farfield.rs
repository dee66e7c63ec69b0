use core::f64::consts::PI;

use super::{LinkGeometry, PowerResult, Regime, SIXTY_FOUR_PI_CUBED};
use crate::geometry::Direction;
use crate::math::{cos, sin, sinc};
use crate::ris::RisConfig;

/// `sin(count·x/2) / (count · sin(x/2))`, the normalised sum of `count`
/// unit phasors with spacing `x`.
///
/// `x/2` is first reduced to `jπ + ε` so grating lobes (`sin(x/2) = 0`,
/// `x ≠ 0`) are as well conditioned as broadside.
fn normalized_dirichlet(count: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let j = libm::round(half / PI);
    let eps = half - j * PI;
    let m = count as f64;
    let r = sinc(m * eps) / sinc(eps);
    // sin(M(jπ+ε)) / sin(jπ+ε) = (−1)^{j(M−1)} sin(Mε) / sin ε
    let flip = (j as i64).rem_euclid(2) == 1 && count.is_multiple_of(2);
    if flip {
        -r
    } else {
        r
    }
}

/// Far-field array factor
/// `β = MN · sinc(Mu/2)/sinc(u/2) · sinc(Nv/2)/sinc(v/2)` with
/// `u = k (sinθt cosφt + sinθr cosφr + δ₁) d_x` and
/// `v = k (sinθt sinφt + sinθr sinφr + δ₂) d_y`.
pub fn array_factor(cfg: &RisConfig, incident: Direction, observed: Direction, deltas: (f64, f64)) -> f64 {
    let (u, v) = phase_steps(cfg, incident, observed, deltas);
    let (m, n) = (cfg.cols(), cfg.rows());
    (m * n) as f64 * normalized_dirichlet(m, u) * normalized_dirichlet(n, v)
}

pub(crate) fn phase_steps(cfg: &RisConfig, incident: Direction, observed: Direction, deltas: (f64, f64)) -> (f64, f64) {
    let k = cfg.wavenumber();
    let (st, sr) = (sin(incident.elevation), sin(observed.elevation));
    let gx = st * cos(incident.azimuth) + sr * cos(observed.azimuth) + deltas.0;
    let gy = st * sin(incident.azimuth) + sr * sin(observed.azimuth) + deltas.1;
    (k * gx * cfg.pitch_x(), k * gy * cfg.pitch_y())
}

/// Brute-force double sum `Σ_m Σ_n e^{j(m−½)u} e^{j(n−½)v}`, the unreduced
/// form of [`array_factor`]. Returned as `(re, im)`; the imaginary part is
/// zero up to rounding.
pub fn array_factor_brute_force(
    cfg: &RisConfig,
    incident: Direction,
    observed: Direction,
    deltas: (f64, f64),
) -> (f64, f64) {
    let (u, v) = phase_steps(cfg, incident, observed, deltas);
    let (mut re, mut im) = (0.0, 0.0);
    for m in cfg.col_range() {
        for n in cfg.row_range() {
            let a = (m as f64 - 0.5) * u + (n as f64 - 0.5) * v;
            re += cos(a);
            im += sin(a);
        }
    }
    (re, im)
}

// G_t G_r G d_x d_y λ² F(θt) F(θr) A² / (64π³ d₁² d₂²)
fn single_cell_budget(cfg: &RisConfig, link: &LinkGeometry) -> f64 {
    let pat = cfg.cell_pattern();
    let ft = pat.value(link.tx.elevation()).unwrap_or(0.0);
    let fr = pat.value(link.rx.elevation()).unwrap_or(0.0);
    let (d1, d2) = (link.tx.distance(), link.rx.distance());
    let lam = cfg.wavelength();
    let a = cfg.amplitude();
    link.tx_antenna.gain()
        * link.rx_antenna.gain()
        * cfg.cell_gain()
        * cfg.pitch_x()
        * cfg.pitch_y()
        * lam
        * lam
        * ft
        * fr
        * a
        * a
        / (SIXTY_FOUR_PI_CUBED * (d1 * d1 * d2 * d2))
}

/// Far-field received power with a linear phase gradient `(δ₁, δ₂)`
/// (`δ = (0, 0)` for a uniform surface), receiver at the link's `(θ_r, φ_r)`.
pub fn received_power_farfield(cfg: &RisConfig, link: &LinkGeometry, deltas: (f64, f64), p_t: f64) -> PowerResult {
    let beta = array_factor(cfg, link.tx.direction(), link.rx.direction(), deltas);
    PowerResult::new(p_t, p_t * single_cell_budget(cfg, link) * beta * beta, Regime::FarField)
}

/// Peak of [`received_power_farfield`]: every cell in phase at the
/// receiver, `β = MN`.
pub fn received_power_farfield_max(cfg: &RisConfig, link: &LinkGeometry, p_t: f64) -> PowerResult {
    let mn = cfg.cell_count() as f64;
    PowerResult::new(p_t, p_t * single_cell_budget(cfg, link) * mn * mn, Regime::FarField)
}

/// `PL = 64π³ (d₁d₂)² / (G_t G_r G M²N² d_x d_y λ² F(θt) F(θr) A²)`.
pub fn pathloss_farfield_beam(cfg: &RisConfig, link: &LinkGeometry) -> f64 {
    let mn = cfg.cell_count() as f64;
    1.0 / (single_cell_budget(cfg, link) * mn * mn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SphericalPlacement;
    use crate::math::to_db;
    use crate::presets;
    use crate::ris::steering_gradients;
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn link(cfg_antenna: crate::Antenna, d1: f64, t: (f64, f64), d2: f64, r: (f64, f64)) -> LinkGeometry {
        LinkGeometry::new(
            SphericalPlacement::new(d1, t.0, t.1).unwrap(),
            SphericalPlacement::new(d2, r.0, r.1).unwrap(),
            cfg_antenna,
            cfg_antenna,
        )
    }

    #[test]
    fn specular_array_factor_is_full() {
        let cfg = presets::large_ris1();
        let b = array_factor(&cfg, Direction::new(FRAC_PI_4, PI), Direction::new(FRAC_PI_4, 0.0), (0.0, 0.0));
        assert!((b - 10200.0).abs() < 1e-8);
        let small = presets::small_ris();
        let b = array_factor(&small, Direction::new(0.0, 0.0), Direction::new(0.0, 0.0), (0.0, 0.0));
        assert_eq!(b, 256.0);
    }

    #[test]
    fn grating_lobe_is_finite() {
        // u = 2π exactly: every column in phase again.
        let cfg = RisConfig::new(4, 4, 0.5, 0.5, 1.0).unwrap();
        let b = array_factor(&cfg, Direction::new(FRAC_PI_2_, 0.0), Direction::new(FRAC_PI_2_, 0.0), (0.0, 0.0));
        assert!((b.abs() - 16.0).abs() < 1e-9, "{b}");
        let (re, _) = array_factor_brute_force(
            &cfg,
            Direction::new(FRAC_PI_2_, 0.0),
            Direction::new(FRAC_PI_2_, 0.0),
            (0.0, 0.0),
        );
        assert!((b - re).abs() < 1e-9);
    }
    const FRAC_PI_2_: f64 = core::f64::consts::FRAC_PI_2;

    #[test]
    fn sinc_null_gives_zero_power() {
        // Mu/2 = π puts the receiver on the first null of the column factor.
        let cfg = presets::small_ris();
        let k = cfg.wavenumber();
        let u = 2.0 * PI / cfg.cols() as f64;
        let sin_r = u / (k * cfg.pitch_x());
        let l = link(presets::c_band_horn(), 10.0, (0.0, 0.0), 10.0, (sin_r.asin(), 0.0));
        let p = received_power_farfield(&cfg, &l, (0.0, 0.0), 1.0);
        let peak = received_power_farfield_max(&cfg, &l, 1.0);
        assert!(p.received_power / peak.received_power < 1e-25);
    }

    #[test]
    fn closed_form_matches_hand_evaluation() {
        let cfg = presets::large_ris1();
        let l = link(presets::x_band_horn(), 100.0, (FRAC_PI_4, PI), 100.0, (FRAC_PI_4, 0.0));
        let p = received_power_farfield_max(&cfg, &l, 1e-3).received_power;
        let f = (0.5f64).sqrt().powi(3);
        let hand = 1e-3 * 126.0 * 126.0 * 8.0 * 10200f64.powi(2) * 1e-4 * 0.0286f64.powi(2) * f * f * 0.81
            / (64.0 * PI.powi(3) * 1e8);
        assert!((p - hand).abs() / hand < 1e-12);
        let spec = received_power_farfield(&cfg, &l, (0.0, 0.0), 1e-3).received_power;
        assert!((spec - hand).abs() / hand < 1e-12);
        // Inverse consistency.
        assert!((p * pathloss_farfield_beam(&cfg, &l) - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn steered_maximum() {
        let cfg = presets::small_ris();
        let inc = Direction::new(FRAC_PI_4, PI);
        let des = Direction::new(FRAC_PI_6, 0.0);
        let deltas = steering_gradients(inc, des);
        let l = link(presets::c_band_horn(), 5.0, (inc.elevation, inc.azimuth), 5.0, (des.elevation, des.azimuth));
        let p = received_power_farfield(&cfg, &l, deltas, 1.0);
        let peak = received_power_farfield_max(&cfg, &l, 1.0);
        assert!((p.received_power - peak.received_power).abs() / peak.received_power < 1e-12);
    }

    #[test]
    fn distance_scaling() {
        let cfg = presets::large_ris1();
        let l = link(presets::x_band_horn(), 80.0, (FRAC_PI_4, PI), 90.0, (FRAC_PI_4, 0.0));
        let l2 = l.with_rx(l.rx.with_distance(180.0).unwrap());
        let a = received_power_farfield_max(&cfg, &l, 1.0).received_power;
        let b = received_power_farfield_max(&cfg, &l2, 1.0).received_power;
        assert_eq!(b / a, 0.25);
        assert!((to_db(a / b) - 6.0206).abs() < 1e-4);

        // Doubling rows and columns: M²N² grows 16x, −12.04 dB in path loss.
        let big = RisConfig::new(200, 204, 0.01, 0.01, 0.0286).unwrap().with_amplitude(0.9).unwrap();
        let gap = to_db(pathloss_farfield_beam(&cfg, &l) / pathloss_farfield_beam(&big, &l));
        assert!((gap - 12.0412).abs() < 1e-4);
    }
}
