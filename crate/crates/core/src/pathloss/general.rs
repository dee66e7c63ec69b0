use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::{LinkGeometry, PowerResult, Regime, SIXTY_FOUR_PI_CUBED};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::math::{sincos, sqrt};
use crate::radiation::{AntennaSpec, CosinePattern};
use crate::ris::{PhaseProfile, RisConfig};

/// One side of the link seen from the cells: direction cosines and
/// distances for an antenna at a fixed position.
#[derive(Clone, Copy)]
struct Terminal {
    position: Point3,
    boresight: Point3,
    // boresight · position, so that boresight · (cell − position) costs two
    // multiplies for cells in the z = 0 plane.
    boresight_dot_position: f64,
    pattern: CosinePattern,
}

impl Terminal {
    fn new(spec: &AntennaSpec) -> Result<Self> {
        let b = spec.boresight_target - spec.position;
        let nb = b.norm();
        if nb == 0.0 || !nb.is_finite() {
            return Err(Error::DegenerateGeometry("antenna coincides with its boresight target"));
        }
        let boresight = b * (1.0 / nb);
        Ok(Self {
            position: spec.position,
            boresight,
            boresight_dot_position: boresight.dot(spec.position),
            pattern: spec.antenna.pattern,
        })
    }

    /// Distance to the cell and `sqrt(F^antenna · F^cell) / r`.
    #[inline]
    fn leg(&self, cell: Point3, cell_pattern: &CosinePattern) -> Result<(f64, f64)> {
        let d = self.position - cell;
        let r = d.norm();
        if r == 0.0 {
            return Err(Error::DegenerateGeometry("terminal coincides with cell"));
        }
        let inv_r = 1.0 / r;
        let cos_cell = d.z * inv_r;
        let cos_antenna = (self.boresight.x * cell.x + self.boresight.y * cell.y + self.boresight.z * cell.z
            - self.boresight_dot_position)
            * inv_r;
        let f = self.pattern.value_from_cosine(cos_antenna) * cell_pattern.value_from_cosine(cos_cell);
        Ok((r, sqrt(f) * inv_r))
    }
}

/// A surface lit by a fixed transmitter. The transmit side of every cell is
/// computed once, so many receiver positions can be evaluated cheaply.
#[derive(Debug, Clone)]
pub struct IlluminatedSurface {
    cells: Vec<Point3>,
    // Per cell: reflection amplitude, phase shift, distance to the
    // transmitter, and sqrt(F^tx F) / r^t.
    amplitude: Vec<f64>,
    phase: Vec<f64>,
    tx_distance: Vec<f64>,
    tx_weight: Vec<f64>,
    cell_pattern: CosinePattern,
    wavenumber: f64,
    wavelength: f64,
    tx_gain: f64,
    // G d_x d_y λ² / (64 π³)
    prefactor: f64,
    min_tx_distance: f64,
}

impl IlluminatedSurface {
    /// Precomputes the incident side for `tx`.
    pub fn new(cfg: &RisConfig, profile: &PhaseProfile, tx: &AntennaSpec) -> Result<Self> {
        Self::with_amplitude(cfg, profile, tx, None)
    }

    fn with_amplitude(
        cfg: &RisConfig,
        profile: &PhaseProfile,
        tx: &AntennaSpec,
        uniform_amplitude: Option<f64>,
    ) -> Result<Self> {
        profile.check_matches(cfg)?;
        let term = Terminal::new(tx)?;
        let n = cfg.cell_count();
        let mut s = Self {
            cells: Vec::with_capacity(n),
            amplitude: Vec::with_capacity(n),
            phase: profile.phases().to_vec(),
            tx_distance: Vec::with_capacity(n),
            tx_weight: Vec::with_capacity(n),
            cell_pattern: *cfg.cell_pattern(),
            wavenumber: cfg.wavenumber(),
            wavelength: cfg.wavelength(),
            tx_gain: tx.antenna.gain(),
            prefactor: cfg.cell_gain() * cfg.pitch_x() * cfg.pitch_y() * cfg.wavelength() * cfg.wavelength()
                / SIXTY_FOUR_PI_CUBED,
            min_tx_distance: f64::INFINITY,
        };
        for (i, (_, c)) in cfg.cells().enumerate() {
            let (r, w) = term.leg(c, &s.cell_pattern)?;
            s.cells.push(c);
            s.tx_distance.push(r);
            s.tx_weight.push(w);
            s.min_tx_distance = s.min_tx_distance.min(r);
            let a = match (uniform_amplitude, profile.amplitudes()) {
                (Some(a), _) => a,
                (None, Some(per_cell)) => per_cell[i],
                (None, None) => cfg.amplitude(),
            };
            s.amplitude.push(a);
        }
        Ok(s)
    }

    /// Same, but every cell reflects with amplitude `cfg.amplitude()`
    /// regardless of any per-cell amplitudes on the profile.
    pub fn with_uniform_amplitude(cfg: &RisConfig, profile: &PhaseProfile, tx: &AntennaSpec) -> Result<Self> {
        Self::with_amplitude(cfg, profile, tx, Some(cfg.amplitude()))
    }

    /// `Σ sqrt(F^combine) Γ / (r^t r^r) · e^{−jk(r^t + r^r)}` in canonical
    /// cell order, plus the smallest receiver-to-cell distance.
    pub fn field_sum(&self, rx: &AntennaSpec) -> Result<(Complex64, f64)> {
        let term = Terminal::new(rx)?;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut min_r = f64::INFINITY;
        for i in 0..self.cells.len() {
            let (r, w) = term.leg(self.cells[i], &self.cell_pattern)?;
            min_r = min_r.min(r);
            let mag = self.amplitude[i] * (self.tx_weight[i] * w);
            let (s, c) = sincos(self.phase[i] - self.wavenumber * (self.tx_distance[i] + r));
            acc.re += mag * c;
            acc.im += mag * s;
        }
        Ok((acc, min_r))
    }

    /// `Σ |sqrt(F^combine) Γ / (r^t r^r)|`: the field sum with every term
    /// brought into phase.
    pub fn magnitude_sum(&self, rx: &AntennaSpec) -> Result<f64> {
        let term = Terminal::new(rx)?;
        let mut acc = 0.0;
        for i in 0..self.cells.len() {
            let (_, w) = term.leg(self.cells[i], &self.cell_pattern)?;
            acc += self.amplitude[i] * (self.tx_weight[i] * w);
        }
        Ok(acc)
    }

    /// Received power at `rx` for transmit power `p_t`.
    pub fn received_power(&self, rx: &AntennaSpec, p_t: f64) -> Result<PowerResult> {
        let (sum, min_r) = self.field_sum(rx)?;
        // G_t G_r as one product keeps the result symmetric under a swap.
        let p_r = p_t * (self.tx_gain * rx.antenna.gain()) * self.prefactor * sum.norm_sqr();
        let mut res = PowerResult::new(p_t, p_r, Regime::General);
        res.warnings.below_lower_bound = self.below_lower_bound(min_r);
        Ok(res)
    }

    /// `G_t G d_x d_y λ² / (64π³)`.
    pub(crate) fn prefactor(&self) -> f64 {
        self.tx_gain * self.prefactor
    }

    pub(crate) fn below_lower_bound(&self, min_rx_distance: f64) -> bool {
        let lb = 5.0 * self.wavelength;
        self.min_tx_distance < lb || min_rx_distance < lb
    }
}

/// Coherent per-cell summation:
/// `P_r = P_t G_t G_r G d_x d_y λ² / (64π³) · |Σ sqrt(F^combine) Γ / (r^t r^r) e^{−jk(r^t + r^r)}|²`.
///
/// Cells are accumulated with `n` ascending in the outer loop and `m`
/// ascending in the inner one, so results are bit-stable.
pub fn received_power_general(
    cfg: &RisConfig,
    profile: &PhaseProfile,
    link: &LinkGeometry,
    p_t: f64,
) -> Result<PowerResult> {
    IlluminatedSurface::new(cfg, profile, &link.tx_spec())?.received_power(&link.rx_spec(), p_t)
}

/// Per-cell quantities behind the general formula, for debugging.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellDiagnostic {
    /// Power intercepted by the cell (W).
    pub incident_power: f64,
    /// Field the cell contributes at the receiver, divided by `sqrt(Z₀)`
    /// (units of `sqrt(W)/m`).
    pub field: Complex64,
}

/// Incident power on each cell and the field each cell contributes at the
/// receiver, in canonical order. The received power is
/// `|Σ field|² / 2 · G_r λ² / (4π)`.
pub fn cell_diagnostics(
    cfg: &RisConfig,
    profile: &PhaseProfile,
    link: &LinkGeometry,
    p_t: f64,
) -> Result<Vec<CellDiagnostic>> {
    profile.check_matches(cfg)?;
    let (tx, rx) = (link.tx_spec(), link.rx_spec());
    let (t, r) = (Terminal::new(&tx)?, Terminal::new(&rx)?);
    let k = cfg.wavenumber();
    let area = cfg.pitch_x() * cfg.pitch_y();
    let amp = |i: usize| profile.amplitudes().map_or(cfg.amplitude(), |a| a[i]);
    cfg.cells()
        .enumerate()
        .map(|(i, (_, c))| {
            let (rt, wt) = t.leg(c, cfg.cell_pattern())?;
            let (rr, wr) = r.leg(c, cfg.cell_pattern())?;
            // wt² r_t² = F^tx F(θ^t)
            let incident_power = tx.antenna.gain() * p_t / (4.0 * PI * rt * rt) * (wt * wt * rt * rt) * area;
            let scale = sqrt(p_t * tx.antenna.gain() * cfg.cell_gain() * area / (8.0 * PI * PI));
            let (s, co) = sincos(profile.phases()[i] - k * (rt + rr));
            let mag = scale * amp(i) * wt * wr;
            Ok(CellDiagnostic { incident_power, field: Complex64::new(mag * co, mag * s) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SphericalPlacement;
    use crate::presets;
    use crate::ris::uniform_profile;
    use core::f64::consts::FRAC_PI_4;

    fn link(d1: f64, t: (f64, f64), d2: f64, r: (f64, f64)) -> LinkGeometry {
        LinkGeometry::new(
            SphericalPlacement::new(d1, t.0, t.1).unwrap(),
            SphericalPlacement::new(d2, r.0, r.1).unwrap(),
            presets::x_band_horn(),
            presets::x_band_horn(),
        )
    }

    #[test]
    fn single_cell_reduces_to_two_legs() {
        // A 2x2 surface with three cells switched off is one reflector.
        let cfg = RisConfig::new(2, 2, 0.01, 0.01, 0.03).unwrap().with_amplitude(0.8).unwrap();
        let prof = PhaseProfile::new(2, 2, alloc::vec![0.0, 0.0, 0.0, 1.3])
            .unwrap()
            .with_amplitudes(alloc::vec![0.0, 0.0, 0.0, 0.8])
            .unwrap();
        let l = link(3.0, (0.4, 2.0), 5.0, (0.9, 4.0));
        let p_t = 2.0;
        let got = received_power_general(&cfg, &prof, &l, p_t).unwrap().received_power;

        // Hand expansion of the single surviving term, cell (1, 1).
        let cell = Point3::new(0.005, 0.005, 0.0);
        let (tx, rx) = (l.tx_point(), l.rx_point());
        let rt = ((tx.x - cell.x).powi(2) + (tx.y - cell.y).powi(2) + tx.z.powi(2)).sqrt();
        let rr = ((rx.x - cell.x).powi(2) + (rx.y - cell.y).powi(2) + rx.z.powi(2)).sqrt();
        let f_tx = l.tx_spec().pattern_towards(cell).unwrap();
        let f_rx = l.rx_spec().pattern_towards(cell).unwrap();
        let f_t = (tx.z / rt).powi(3);
        let f_r = (rx.z / rr).powi(3);
        let (gt, gr, g) = (126.0, 126.0, 8.0);
        let lam: f64 = 0.03;
        // Incident power on the cell, reflected with |Γ|², re-radiated with
        // gain G and collected by an aperture G_r λ²/4π.
        let p_in = gt * p_t / (4.0 * PI * rt * rt) * f_tx * f_t * 1e-4;
        let expected = g * p_in * 0.64 / (4.0 * PI * rr * rr) * f_r * f_rx * gr * lam * lam / (4.0 * PI);
        assert!((got - expected).abs() / expected < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn diagnostics_reassemble_total() {
        let cfg = presets::small_ris();
        let prof = crate::ris::nearfield_focus_codebook(&cfg, Point3::new(0.0, -0.5, 1.0), Point3::new(0.4, 0.3, 2.0));
        let l = link(1.2, (0.3, 1.0), 2.5, (1.0, 4.0));
        let p_t = 1e-3;
        let d = cell_diagnostics(&cfg, &prof, &l, p_t).unwrap();
        let sum: Complex64 = d.iter().map(|c| c.field).sum();
        let lam = cfg.wavelength();
        let p_r = sum.norm_sqr() / 2.0 * l.rx_antenna.gain() * lam * lam / (4.0 * PI);
        let reference = received_power_general(&cfg, &prof, &l, p_t).unwrap().received_power;
        assert!((p_r - reference).abs() / reference < 1e-10);
        assert!(d.iter().all(|c| c.incident_power >= 0.0));
        let total_in: f64 = d.iter().map(|c| c.incident_power).sum();
        assert!(total_in < p_t);
    }

    #[test]
    fn swapping_is_bit_exact() {
        let cfg = presets::small_ris();
        let prof = PhaseProfile::from_fn(&cfg, |idx, _| (idx.n * 7 + idx.m * 3) as f64 * 0.37);
        let l = LinkGeometry::new(
            SphericalPlacement::new(2.0, 0.5, 1.0).unwrap(),
            SphericalPlacement::new(7.0, 1.1, 3.5).unwrap(),
            presets::c_band_horn(),
            presets::x_band_horn(),
        );
        let a = received_power_general(&cfg, &prof, &l, 1.0).unwrap().received_power;
        let b = received_power_general(&cfg, &prof, &l.swapped(), 1.0).unwrap().received_power;
        assert_eq!(a, b);
    }

    #[test]
    fn errors_propagate() {
        let cfg = presets::small_ris();
        let wrong = uniform_profile(&presets::large_ris2(), 0.0);
        let l = link(1.0, (FRAC_PI_4, PI), 1.0, (FRAC_PI_4, 0.0));
        assert!(matches!(received_power_general(&cfg, &wrong, &l, 1.0), Err(Error::DimensionMismatch { .. })));
        let mut bad = l;
        bad.tx_boresight = bad.tx_point();
        assert!(received_power_general(&cfg, &uniform_profile(&cfg, 0.0), &bad, 1.0).is_err());
    }

    #[test]
    fn lower_bound_flag() {
        let cfg = presets::large_ris1();
        let prof = uniform_profile(&cfg, 0.0);
        let near = link(0.1, (0.0, 0.0), 10.0, (FRAC_PI_4, 0.0));
        assert!(received_power_general(&cfg, &prof, &near, 1.0).unwrap().warnings.below_lower_bound);
        let far = link(3.0, (0.0, 0.0), 10.0, (FRAC_PI_4, 0.0));
        assert!(!received_power_general(&cfg, &prof, &far, 1.0).unwrap().warnings.below_lower_bound);
    }
}
