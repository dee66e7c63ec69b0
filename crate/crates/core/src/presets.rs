//! Reference surfaces and horn antennas.
//!
//! Wavelengths are the rounded values quoted with the hardware (0.0286 m at
//! 10.5 GHz, 0.07 m at 4.25 GHz), not `c / f`. Horn gains are derived from
//! their patterns: 126 (21.0 dB) and 28 (14.5 dB).

use core::str::FromStr;

use crate::radiation::{Antenna, CosinePattern};
use crate::ris::RisConfig;

fn surface(rows: usize, cols: usize, pitch: f64, amplitude: f64, frequency: f64, wavelength: f64) -> RisConfig {
    RisConfig::new(rows, cols, pitch, pitch, wavelength)
        .and_then(|c| c.with_amplitude(amplitude))
        .and_then(|c| c.with_frequency(frequency))
        .expect("preset parameters are valid")
}

/// 100 x 102 cells, 10 mm pitch, A = 0.9, 10.5 GHz.
pub fn large_ris1() -> RisConfig {
    surface(100, 102, 0.01, 0.9, 10.5e9, 0.0286)
}

/// 50 x 34 cells, 10 mm pitch, A = 0.9, 10.5 GHz.
pub fn large_ris2() -> RisConfig {
    surface(50, 34, 0.01, 0.9, 10.5e9, 0.0286)
}

/// 8 x 32 cells, 12 mm pitch, A = 0.7, 4.25 GHz.
pub fn small_ris() -> RisConfig {
    surface(8, 32, 0.012, 0.7, 4.25e9, 0.07)
}

/// X-band horn, `cos^62`.
pub fn x_band_horn() -> Antenna {
    Antenna::with_derived_gain(CosinePattern::new(62.0).expect("valid exponent"))
}

/// C-band horn, `cos^13`.
pub fn c_band_horn() -> Antenna {
    Antenna::with_derived_gain(CosinePattern::new(13.0).expect("valid exponent"))
}

/// A named preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// [`large_ris1`]
    LargeRis1,
    /// [`large_ris2`]
    LargeRis2,
    /// [`small_ris`]
    SmallRis,
    /// [`x_band_horn`]
    XBandHorn,
    /// [`c_band_horn`]
    CBandHorn,
}

impl Preset {
    /// Every preset, in display order.
    pub const ALL: [Preset; 5] =
        [Preset::LargeRis1, Preset::LargeRis2, Preset::SmallRis, Preset::XBandHorn, Preset::CBandHorn];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Preset::LargeRis1 => "large-ris1",
            Preset::LargeRis2 => "large-ris2",
            Preset::SmallRis => "small-ris",
            Preset::XBandHorn => "x-band-horn",
            Preset::CBandHorn => "c-band-horn",
        }
    }

    /// The surface, for surface presets.
    pub fn surface(self) -> Option<RisConfig> {
        match self {
            Preset::LargeRis1 => Some(large_ris1()),
            Preset::LargeRis2 => Some(large_ris2()),
            Preset::SmallRis => Some(small_ris()),
            _ => None,
        }
    }

    /// The antenna: the horn itself, or the horn a surface is measured with.
    pub fn antenna(self) -> Antenna {
        match self {
            Preset::LargeRis1 | Preset::LargeRis2 | Preset::XBandHorn => x_band_horn(),
            Preset::SmallRis | Preset::CBandHorn => c_band_horn(),
        }
    }
}

/// Unrecognised preset name.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown preset (expected one of large-ris1, large-ris2, small-ris, x-band-horn, c-band-horn)")]
pub struct UnknownPreset;

impl FromStr for Preset {
    type Err = UnknownPreset;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or(UnknownPreset)
    }
}
