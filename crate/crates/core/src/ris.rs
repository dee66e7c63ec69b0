//! Surface configuration, reflection-coefficient profiles and phase designs.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{invalid, Error, Result};
use crate::geometry::{cell_distance, virtual_transmitter, CellIndex, Direction, Point3};
use crate::math::{atan2, cos, sin, sqrt, wrap_phase};
use crate::radiation::CosinePattern;
use crate::SPEED_OF_LIGHT;

/// Geometry and electromagnetic parameters of a surface.
#[derive(Debug, Clone, PartialEq)]
pub struct RisConfig {
    rows: usize,
    cols: usize,
    pitch_x: f64,
    pitch_y: f64,
    cell_pattern: CosinePattern,
    cell_gain: f64,
    amplitude: f64,
    wavelength: f64,
    frequency: Option<f64>,
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(invalid(name, "must be positive and finite"));
    }
    Ok(())
}

impl RisConfig {
    /// A `rows x cols` surface with `cos³` cells and unit reflection
    /// amplitude. Both dimensions must be even.
    pub fn new(rows: usize, cols: usize, pitch_x: f64, pitch_y: f64, wavelength: f64) -> Result<Self> {
        if rows == 0 || cols == 0 || !rows.is_multiple_of(2) || !cols.is_multiple_of(2) {
            return Err(invalid("grid size", "rows and columns must be positive and even"));
        }
        if rows > i32::MAX as usize / 2 || cols > i32::MAX as usize / 2 {
            return Err(invalid("grid size", "too large"));
        }
        check_positive("cell pitch", pitch_x)?;
        check_positive("cell pitch", pitch_y)?;
        check_positive("wavelength", wavelength)?;
        let cell_pattern = CosinePattern::CELL;
        Ok(Self {
            rows,
            cols,
            pitch_x,
            pitch_y,
            cell_pattern,
            cell_gain: cell_pattern.closed_form_gain(),
            amplitude: 1.0,
            wavelength,
            frequency: None,
        })
    }

    /// Same as [`RisConfig::new`] with `λ = c / f`.
    pub fn from_frequency(rows: usize, cols: usize, pitch_x: f64, pitch_y: f64, frequency: f64) -> Result<Self> {
        check_positive("frequency", frequency)?;
        let mut cfg = Self::new(rows, cols, pitch_x, pitch_y, SPEED_OF_LIGHT / frequency)?;
        cfg.frequency = Some(frequency);
        Ok(cfg)
    }

    /// Sets the uniform reflection amplitude `A ∈ (0, 1]`.
    pub fn with_amplitude(mut self, amplitude: f64) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude <= 1.0) {
            return Err(invalid("reflection amplitude", "must be in (0, 1]"));
        }
        self.amplitude = amplitude;
        Ok(self)
    }

    /// Sets the cell pattern; the cell gain follows as `2(α + 1)`.
    pub fn with_cell_pattern(mut self, pattern: CosinePattern) -> Self {
        self.cell_pattern = pattern;
        self.cell_gain = pattern.closed_form_gain();
        self
    }

    /// Records the operating frequency without touching the wavelength.
    pub fn with_frequency(mut self, frequency: f64) -> Result<Self> {
        check_positive("frequency", frequency)?;
        self.frequency = Some(frequency);
        Ok(self)
    }

    /// Number of rows `N` (along y).
    pub fn rows(&self) -> usize {
        self.rows
    }
    /// Number of columns `M` (along x).
    pub fn cols(&self) -> usize {
        self.cols
    }
    /// Cell pitch along x.
    pub fn pitch_x(&self) -> f64 {
        self.pitch_x
    }
    /// Cell pitch along y.
    pub fn pitch_y(&self) -> f64 {
        self.pitch_y
    }
    /// Cell radiation pattern.
    pub fn cell_pattern(&self) -> &CosinePattern {
        &self.cell_pattern
    }
    /// Cell gain `G`.
    pub fn cell_gain(&self) -> f64 {
        self.cell_gain
    }
    /// Uniform reflection amplitude `A`.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
    /// Operating wavelength.
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }
    /// Operating frequency, when known.
    pub fn frequency(&self) -> Option<f64> {
        self.frequency
    }
    /// Wavenumber `2π / λ`.
    pub fn wavenumber(&self) -> f64 {
        TAU / self.wavelength
    }
    /// `N M`.
    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }
    /// Extent along x, `M d_x`.
    pub fn width(&self) -> f64 {
        self.cols as f64 * self.pitch_x
    }
    /// Extent along y, `N d_y`.
    pub fn height(&self) -> f64 {
        self.rows as f64 * self.pitch_y
    }
    /// Corner-to-corner diagonal.
    pub fn diagonal(&self) -> f64 {
        sqrt(self.width() * self.width() + self.height() * self.height())
    }

    /// `true` when the pitch leaves the usual `[λ/10, λ/2]` band. Not an
    /// error; the model still applies.
    pub fn pitch_outside_usual_range(&self) -> bool {
        let (lo, hi) = (self.wavelength / 10.0, self.wavelength / 2.0);
        ![self.pitch_x, self.pitch_y].iter().all(|p| (lo..=hi).contains(p))
    }

    /// Both sides at least ten wavelengths long.
    pub fn is_electrically_large(&self) -> bool {
        self.width() >= 10.0 * self.wavelength && self.height() >= 10.0 * self.wavelength
    }

    /// Row range `1 − N/2 ..= N/2`.
    pub fn row_range(&self) -> core::ops::RangeInclusive<i32> {
        let h = (self.rows / 2) as i32;
        1 - h..=h
    }

    /// Column range `1 − M/2 ..= M/2`.
    pub fn col_range(&self) -> core::ops::RangeInclusive<i32> {
        let h = (self.cols / 2) as i32;
        1 - h..=h
    }

    /// `true` if `idx` addresses a cell of this surface.
    pub fn contains(&self, idx: CellIndex) -> bool {
        self.row_range().contains(&idx.n) && self.col_range().contains(&idx.m)
    }

    /// Centre of a cell, without the range check.
    pub fn cell_center_unchecked(&self, idx: CellIndex) -> Point3 {
        Point3::new((idx.m as f64 - 0.5) * self.pitch_x, (idx.n as f64 - 0.5) * self.pitch_y, 0.0)
    }

    /// All cells in canonical order: `n` ascending outer, `m` ascending inner.
    pub fn cells(&self) -> impl Iterator<Item = (CellIndex, Point3)> + '_ {
        let cols = self.col_range();
        self.row_range().flat_map(move |n| {
            cols.clone().map(move |m| {
                let idx = CellIndex::new(n, m);
                (idx, self.cell_center_unchecked(idx))
            })
        })
    }

    /// Flat position of a cell in canonical order.
    pub fn linear_index(&self, idx: CellIndex) -> Option<usize> {
        if !self.contains(idx) {
            return None;
        }
        let row = (idx.n - *self.row_range().start()) as usize;
        let col = (idx.m - *self.col_range().start()) as usize;
        Some(row * self.cols + col)
    }
}

/// Per-cell phase shifts in `[0, 2π)`, stored row-major (`n` ascending, then
/// `m` ascending). Amplitudes default to the surface's uniform `A` unless a
/// per-cell set is attached.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    rows: usize,
    cols: usize,
    phases: Vec<f64>,
    amplitudes: Option<Vec<f64>>,
}

impl PhaseProfile {
    /// Builds a profile from row-major phases. Values are wrapped into
    /// `[0, 2π)`; non-finite values are rejected.
    pub fn new(rows: usize, cols: usize, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != rows * cols {
            return Err(invalid("phase profile", "length does not match rows x cols"));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(invalid("phase profile", "phases must be finite"));
        }
        let phases = phases.into_iter().map(wrap_phase).collect();
        Ok(Self { rows, cols, phases, amplitudes: None })
    }

    /// Evaluates `f` at every cell of `cfg` in canonical order.
    pub fn from_fn(cfg: &RisConfig, mut f: impl FnMut(CellIndex, Point3) -> f64) -> Self {
        let phases = cfg.cells().map(|(idx, c)| wrap_phase(f(idx, c))).collect();
        Self { rows: cfg.rows(), cols: cfg.cols(), phases, amplitudes: None }
    }

    /// Attaches per-cell reflection amplitudes in `[0, 1]`.
    pub fn with_amplitudes(mut self, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != self.phases.len() {
            return Err(invalid("amplitude profile", "length does not match rows x cols"));
        }
        if amplitudes.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(invalid("amplitude profile", "amplitudes must lie in [0, 1]"));
        }
        self.amplitudes = Some(amplitudes);
        Ok(self)
    }

    /// Rows.
    pub fn rows(&self) -> usize {
        self.rows
    }
    /// Columns.
    pub fn cols(&self) -> usize {
        self.cols
    }
    /// Row-major phases.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }
    /// Per-cell amplitudes, if attached.
    pub fn amplitudes(&self) -> Option<&[f64]> {
        self.amplitudes.as_deref()
    }

    /// Phase of cell `idx` on `cfg`.
    pub fn phase(&self, cfg: &RisConfig, idx: CellIndex) -> Result<f64> {
        self.check_matches(cfg)?;
        cfg.linear_index(idx).map(|i| self.phases[i]).ok_or(Error::IndexOutOfRange {
            n: idx.n,
            m: idx.m,
            rows: cfg.rows(),
            cols: cfg.cols(),
        })
    }

    /// Fails unless the profile has the surface's dimensions.
    pub fn check_matches(&self, cfg: &RisConfig) -> Result<()> {
        if self.rows != cfg.rows() || self.cols != cfg.cols() {
            return Err(Error::DimensionMismatch {
                rows: cfg.rows(),
                cols: cfg.cols(),
                found_rows: self.rows,
                found_cols: self.cols,
            });
        }
        Ok(())
    }
}

/// Every cell shares the same phase.
pub fn uniform_profile(cfg: &RisConfig, phase: f64) -> PhaseProfile {
    PhaseProfile::from_fn(cfg, |_, _| phase)
}

// Direction-cosine sums that are pure trig rounding residue are zeroed so
// the specular design comes out exactly flat.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

/// Phase gradients `(δ₁, δ₂)` that steer a far-field beam from `incident`
/// towards `desired`.
pub fn steering_gradients(incident: Direction, desired: Direction) -> (f64, f64) {
    let (st, sd) = (sin(incident.elevation), sin(desired.elevation));
    let d1 = -(st * cos(incident.azimuth) + sd * cos(desired.azimuth));
    let d2 = -(st * sin(incident.azimuth) + sd * sin(desired.azimuth));
    (snap(d1), snap(d2))
}

/// Linear phase gradient steering a plane wave from `incident` to `desired`:
/// `φ = mod(−k[(sinθt cosφt + sinθd cosφd)(m−½)d_x + (sinθt sinφt + sinθd sinφd)(n−½)d_y], 2π)`.
pub fn farfield_codebook(cfg: &RisConfig, incident: Direction, desired: Direction) -> PhaseProfile {
    let (d1, d2) = steering_gradients(incident, desired);
    let k = cfg.wavenumber();
    PhaseProfile::from_fn(cfg, |_, c| k * (d1 * c.x + d2 * c.y))
}

/// Focuses on a specific receiver: `φ = mod(k (r^t + r^r), 2π)`.
pub fn nearfield_focus_codebook(cfg: &RisConfig, tx: Point3, rx: Point3) -> PhaseProfile {
    let k = cfg.wavenumber();
    PhaseProfile::from_fn(cfg, |_, c| k * (cell_distance(tx, c) + cell_distance(rx, c)))
}

/// Near-field broadcast towards `desired`: compensates the path difference
/// between the real transmitter and a virtual one at distance `d1` in the
/// mirror direction, `φ = mod(k (r^t − r^virt), 2π)`.
pub fn nearfield_broadcast_codebook(cfg: &RisConfig, tx: Point3, d1: f64, desired: Direction) -> PhaseProfile {
    let k = cfg.wavenumber();
    let virt = virtual_transmitter(d1, desired);
    PhaseProfile::from_fn(cfg, |_, c| k * (cell_distance(tx, c) - cell_distance(virt, c)))
}

/// Column-striped 0/π pattern with period four columns: 0 when
/// `m mod 4 ∈ {0, 1}`, π when `m mod 4 ∈ {2, 3}` (non-negative remainder).
pub fn two_beam_stripe_profile(cfg: &RisConfig) -> PhaseProfile {
    PhaseProfile::from_fn(cfg, |idx, _| if idx.m.rem_euclid(4) < 2 { 0.0 } else { PI })
}

/// Beam directions of [`two_beam_stripe_profile`]: the ±1 grating orders
/// `u_x = −sinθt cosφt ± λ / (4 d_x)` around the specular direction. Orders
/// that would be evanescent are dropped.
pub fn stripe_beam_directions(cfg: &RisConfig, incident: Direction) -> Vec<Direction> {
    let st = sin(incident.elevation);
    let (ux0, uy) = (-st * cos(incident.azimuth), -st * sin(incident.azimuth));
    let shift = cfg.wavelength() / (4.0 * cfg.pitch_x());
    [ux0 + shift, ux0 - shift]
        .into_iter()
        .filter_map(|ux| {
            let s2 = ux * ux + uy * uy;
            (s2 <= 1.0).then(|| Direction::new(atan2(sqrt(s2), sqrt(1.0 - s2)), wrap_phase(atan2(uy, ux))))
        })
        .collect()
}

/// Switching technology of the unit cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellTechnology {
    /// Varactor diodes; bias current is negligible.
    Varactor,
    /// PIN diodes; each on-state cell draws a fixed bias power.
    PinDiode,
}

/// Bias power of one on-state PIN-diode cell (W).
pub const PIN_POWER_PER_CELL: f64 = 0.33e-3;

/// Static power drawn by the surface itself (controller excluded), in watts.
pub fn power_consumption(kind: CellTechnology, n_on: usize, cell_count: usize) -> Result<f64> {
    if n_on > cell_count {
        return Err(Error::TooManyCellsOn { n_on, cells: cell_count });
    }
    Ok(match kind {
        CellTechnology::Varactor => 0.0,
        CellTechnology::PinDiode => 0.33 * n_on as f64 / 1000.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SphericalPlacement;
    use crate::presets;
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn stripe_beams_at_normal_incidence() {
        let cfg = presets::large_ris2();
        let beams = stripe_beam_directions(&cfg, Direction::new(0.0, 0.0));
        assert_eq!(beams.len(), 2);
        let expect = (0.0286f64 / 0.04).asin();
        assert!((beams[0].elevation - expect).abs() < 1e-12);
        assert_eq!(beams[0].azimuth, 0.0);
        assert!((beams[1].elevation - expect).abs() < 1e-12);
        assert!((beams[1].azimuth - PI).abs() < 1e-12);
        // Grazing incidence pushes one order past the horizon.
        let beams = stripe_beam_directions(&cfg, Direction::new(1.2, PI));
        assert_eq!(beams.len(), 1);
    }

    #[test]
    fn config_validation() {
        assert!(RisConfig::new(3, 2, 0.01, 0.01, 0.03).is_err());
        assert!(RisConfig::new(2, 0, 0.01, 0.01, 0.03).is_err());
        assert!(RisConfig::new(2, 2, -0.01, 0.01, 0.03).is_err());
        assert!(RisConfig::new(2, 2, 0.01, 0.01, 0.0).is_err());
        let c = RisConfig::new(2, 2, 0.01, 0.01, 0.03).unwrap();
        assert!(c.clone().with_amplitude(0.0).is_err());
        assert!(c.clone().with_amplitude(1.1).is_err());
        assert!(!c.pitch_outside_usual_range());
        let c = RisConfig::new(2, 2, 0.001, 0.01, 0.03).unwrap();
        assert!(c.pitch_outside_usual_range());
        let f = RisConfig::from_frequency(2, 2, 0.01, 0.01, 10.5e9).unwrap();
        assert!((f.wavelength() - 0.028552).abs() < 1e-6);
    }

    #[test]
    fn canonical_cell_order() {
        let c = RisConfig::new(2, 4, 0.01, 0.01, 0.03).unwrap();
        let idx: Vec<_> = c.cells().map(|(i, _)| (i.n, i.m)).collect();
        assert_eq!(idx, [(0, -1), (0, 0), (0, 1), (0, 2), (1, -1), (1, 0), (1, 1), (1, 2)]);
        for (k, (i, _)) in c.cells().enumerate() {
            assert_eq!(c.linear_index(i), Some(k));
        }
    }

    #[test]
    fn uniform_wraps() {
        let c = presets::small_ris();
        assert!(uniform_profile(&c, 0.0).phases().iter().all(|&p| p == 0.0));
        assert!(uniform_profile(&c, TAU).phases().iter().all(|&p| p == 0.0));
        assert!(uniform_profile(&c, -PI / 2.0).phases().iter().all(|&p| (p - 1.5 * PI).abs() < 1e-15));
    }

    #[test]
    fn farfield_specular_is_flat() {
        let c = presets::large_ris1();
        let p = farfield_codebook(&c, Direction::new(FRAC_PI_4, PI), Direction::new(FRAC_PI_4, 0.0));
        assert!(p.phases().iter().all(|&x| x == 0.0));
        let p = farfield_codebook(&c, Direction::new(0.0, 0.0), Direction::new(0.0, 0.0));
        assert!(p.phases().iter().all(|&x| x == 0.0));
        for (t, a) in [(0.3, 0.0), (0.7, 1.2), (1.2, 5.0), (FRAC_PI_4, PI)] {
            let inc = Direction::new(t, a);
            let p = farfield_codebook(&c, inc, inc.specular());
            assert!(p.phases().iter().all(|&x| x == 0.0), "({t}, {a})");
        }
    }

    #[test]
    fn farfield_column_ramp() {
        let c = presets::small_ris();
        let p = farfield_codebook(&c, Direction::new(FRAC_PI_4, PI), Direction::new(FRAC_PI_6, 0.0));
        let slope = wrap_phase(c.wavenumber() * (FRAC_PI_4.sin() - FRAC_PI_6.sin()) * c.pitch_x());
        for n in c.row_range() {
            for m in *c.col_range().start()..*c.col_range().end() {
                let a = p.phase(&c, CellIndex::new(n, m)).unwrap();
                let b = p.phase(&c, CellIndex::new(n, m + 1)).unwrap();
                assert!((wrap_phase(b - a) - slope).abs() < 1e-9);
            }
            // No variation along y for an x-z plane steer.
        }
        let a = p.phase(&c, CellIndex::new(1, 3)).unwrap();
        let b = p.phase(&c, CellIndex::new(-2, 3)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn focus_codebook_symmetry() {
        let c = RisConfig::new(2, 2, 0.01, 0.01, 0.03).unwrap();
        let p = nearfield_focus_codebook(&c, Point3::new(0.0, 0.0, 1.0), Point3::new(0.0, 0.0, 1.0));
        let v = p.phases();
        assert!(v.iter().all(|&x| (x - v[0]).abs() < 1e-12));

        // Moving both terminals out by whole wavelengths along the normal
        // changes every phase by nearly the same constant.
        let c = presets::small_ris();
        let lam = c.wavelength();
        let a = nearfield_focus_codebook(&c, Point3::new(0.0, 0.0, 50.0), Point3::new(0.0, 0.0, 60.0));
        let b = nearfield_focus_codebook(
            &c,
            Point3::new(0.0, 0.0, 50.0 + 3.0 * lam),
            Point3::new(0.0, 0.0, 60.0 + 5.0 * lam),
        );
        let off: Vec<f64> = a.phases().iter().zip(b.phases()).map(|(x, y)| wrap_phase(y - x)).collect();
        for o in &off {
            let d = wrap_phase(o - off[0] + PI) - PI;
            assert!(d.abs() < 1e-3, "{d}");
        }
    }

    #[test]
    fn broadcast_codebook_virtual_coincides() {
        let c = presets::large_ris1();
        let des = Direction::new(FRAC_PI_4, FRAC_PI_4);
        let tx = virtual_transmitter(2.0, des);
        let p = nearfield_broadcast_codebook(&c, tx, 2.0, des);
        assert!(p.phases().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn broadcast_codebook_specular_is_constant() {
        // Desired direction equal to the specular direction of the real
        // transmitter puts the virtual transmitter on top of it.
        let c = presets::large_ris1();
        let place = SphericalPlacement::new(2.0, FRAC_PI_4, PI).unwrap();
        let tx = place.to_point();
        let p = nearfield_broadcast_codebook(&c, tx, 2.0, place.direction().specular());
        let u = uniform_profile(&c, 0.0);
        let offset = wrap_phase(p.phases()[0] - u.phases()[0]);
        for (a, b) in p.phases().iter().zip(u.phases()) {
            let d = wrap_phase(a - b - offset + PI) - PI;
            assert!(d.abs() < 1e-9);
        }
    }

    #[test]
    fn stripe_rule() {
        let c = presets::large_ris2();
        let p = two_beam_stripe_profile(&c);
        let at = |m| p.phase(&c, CellIndex::new(1, m)).unwrap();
        assert_eq!(at(1), 0.0);
        assert_eq!(at(2), PI);
        assert_eq!(at(3), PI);
        assert_eq!(at(4), 0.0);
        assert_eq!(at(0), 0.0);
        assert_eq!(at(-1), PI);
        assert_eq!(at(-3), 0.0);
        assert!(p.phases().iter().all(|&x| x == 0.0 || x == PI));
    }

    #[test]
    fn profile_validation() {
        let c = RisConfig::new(2, 2, 0.01, 0.01, 0.03).unwrap();
        assert!(PhaseProfile::new(2, 2, alloc::vec![0.0; 3]).is_err());
        assert!(PhaseProfile::new(2, 2, alloc::vec![f64::NAN; 4]).is_err());
        let p = PhaseProfile::new(2, 2, alloc::vec![7.0, -1.0, 0.0, 1.0]).unwrap();
        assert!((p.phases()[0] - (7.0 - TAU)).abs() < 1e-15);
        assert!(p.clone().with_amplitudes(alloc::vec![0.5; 4]).is_ok());
        assert!(p.clone().with_amplitudes(alloc::vec![1.5; 4]).is_err());
        let other = presets::small_ris();
        assert!(matches!(p.check_matches(&other), Err(Error::DimensionMismatch { .. })));
        assert!(p.phase(&c, CellIndex::new(5, 5)).is_err());
    }

    #[test]
    fn power_consumption_examples() {
        assert_eq!(power_consumption(CellTechnology::Varactor, 123, 256).unwrap(), 0.0);
        assert_eq!(power_consumption(CellTechnology::PinDiode, 1700, 1700).unwrap(), 0.561);
        assert_eq!(power_consumption(CellTechnology::PinDiode, 0, 1700).unwrap(), 0.0);
        assert!(power_consumption(CellTechnology::PinDiode, 1701, 1700).is_err());
        assert!((PIN_POWER_PER_CELL * 1700.0 - 0.561).abs() < 1e-15);
    }
}
