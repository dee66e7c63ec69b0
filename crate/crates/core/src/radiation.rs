//! Radiation patterns and gains of antennas and unit cells.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};
use crate::geometry::{antenna_offboresight_angle, cell_to_terminal_angles, Point3};
use crate::math::{acos, cos, pow, powu};

/// Number of elevation intervals used by [`gain_from_pattern`].
pub const GAIN_QUADRATURE_INTERVALS: usize = 1 << 14;

/// Normalised power pattern `cos^α θ` on the front hemisphere, zero behind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosinePattern {
    exponent: f64,
    // Integer exponents take the multiply-only path.
    int_exponent: Option<u32>,
}

impl CosinePattern {
    /// Pattern of the unit cells used throughout: `cos³θ`.
    pub const CELL: CosinePattern = CosinePattern { exponent: 3.0, int_exponent: Some(3) };

    /// Creates a pattern with exponent `α ≥ 0`.
    pub fn new(exponent: f64) -> Result<Self> {
        if !exponent.is_finite() || exponent < 0.0 {
            return Err(invalid("pattern exponent", "must be finite and non-negative"));
        }
        let int_exponent =
            if exponent <= 1024.0 && exponent == (exponent as u32) as f64 { Some(exponent as u32) } else { None };
        Ok(Self { exponent, int_exponent })
    }

    /// The exponent `α`.
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// `F(θ)` for `θ ∈ [0, π]`.
    pub fn value(&self, theta: f64) -> Result<f64> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::AngleOutOfRange { angle: theta, min: 0.0, max: PI });
        }
        if theta > FRAC_PI_2 {
            return Ok(0.0);
        }
        Ok(self.value_from_cosine(cos(theta)))
    }

    /// `F` given `cos θ` directly. Negative cosines are behind the aperture.
    #[inline]
    pub fn value_from_cosine(&self, c: f64) -> f64 {
        if c < 0.0 {
            return 0.0;
        }
        match self.int_exponent {
            Some(k) => powu(c, k),
            None => pow(c, self.exponent),
        }
    }

    /// Half-width of the −3 dB main lobe, `arccos(2^(−1/α))`.
    pub fn half_power_half_width(&self) -> f64 {
        if self.exponent == 0.0 {
            return FRAC_PI_2;
        }
        acos(pow(2.0, -1.0 / self.exponent))
    }

    /// Closed-form gain of the hemispherical cosine family, `2(α + 1)`.
    pub fn closed_form_gain(&self) -> f64 {
        2.0 * (self.exponent + 1.0)
    }
}

/// Gain of a pattern at 100 % efficiency, `4π / ∬ F sinθ dθ dφ`, by
/// trapezoidal quadrature over the front hemisphere (the pattern is zero
/// behind it).
pub fn gain_from_pattern(p: &CosinePattern) -> f64 {
    let n = GAIN_QUADRATURE_INTERVALS;
    let h = FRAC_PI_2 / n as f64;
    let f = |theta: f64| {
        let (s, c) = crate::math::sincos(theta);
        p.value_from_cosine(c) * s
    };
    let mut sum = 0.5 * (f(0.0) + f(FRAC_PI_2));
    for i in 1..n {
        sum += f(i as f64 * h);
    }
    // Azimuth integral contributes 2π.
    4.0 * PI / (2.0 * PI * sum * h)
}

/// An antenna: its pattern, its peak gain, and the extent of its main lobe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Antenna {
    /// Normalised power pattern about the boresight.
    pub pattern: CosinePattern,
    gain: f64,
    main_lobe_half_width: Option<f64>,
}

impl Antenna {
    /// Creates an antenna with an explicit linear gain.
    pub fn new(pattern: CosinePattern, gain: f64) -> Result<Self> {
        if !gain.is_finite() || gain <= 0.0 {
            return Err(invalid("antenna gain", "must be positive and finite"));
        }
        Ok(Self { pattern, gain, main_lobe_half_width: None })
    }

    /// Creates an antenna whose gain follows from its pattern, `2(α + 1)`.
    pub fn with_derived_gain(pattern: CosinePattern) -> Self {
        Self { pattern, gain: pattern.closed_form_gain(), main_lobe_half_width: None }
    }

    /// Overrides the main-lobe half-width used by the broadcast coverage test.
    pub fn with_main_lobe_half_width(mut self, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width <= PI) {
            return Err(invalid("main-lobe half-width", "must be in (0, π]"));
        }
        self.main_lobe_half_width = Some(half_width);
        Ok(self)
    }

    /// Linear peak gain.
    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Main-lobe half-width: the override if set, else the −3 dB half-width.
    pub fn main_lobe_half_width(&self) -> f64 {
        self.main_lobe_half_width.unwrap_or_else(|| self.pattern.half_power_half_width())
    }
}

/// An antenna placed in space and aimed at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaSpec {
    /// Radiating element.
    pub antenna: Antenna,
    /// Phase centre.
    pub position: Point3,
    /// Point the boresight passes through.
    pub boresight_target: Point3,
}

impl AntennaSpec {
    /// Places an antenna.
    pub fn new(antenna: Antenna, position: Point3, boresight_target: Point3) -> Self {
        Self { antenna, position, boresight_target }
    }

    /// Places an antenna aimed at the surface centre.
    pub fn aimed_at_origin(antenna: Antenna, position: Point3) -> Self {
        Self::new(antenna, position, Point3::ORIGIN)
    }

    /// Pattern value towards `point`.
    pub fn pattern_towards(&self, point: Point3) -> Result<f64> {
        let theta = antenna_offboresight_angle(self.position, self.boresight_target, point)?;
        self.antenna.pattern.value(theta)
    }
}

/// `F^tx(θ^tx) F(θ^t) F(θ^r) F^rx(θ^rx)` for one cell.
pub fn combined_pattern_factor(
    tx: &AntennaSpec,
    rx: &AntennaSpec,
    cell_pattern: &CosinePattern,
    cell: Point3,
) -> Result<f64> {
    let (theta_t, _) = cell_to_terminal_angles(cell, tx.position)?;
    let (theta_r, _) = cell_to_terminal_angles(cell, rx.position)?;
    Ok(tx.pattern_towards(cell)?
        * cell_pattern.value(theta_t)?
        * cell_pattern.value(theta_r)?
        * rx.pattern_towards(cell)?)
}
