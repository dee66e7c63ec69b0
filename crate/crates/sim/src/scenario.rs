//! Scenario files: a JSON document describing the surface, both antennas,
//! the link, the phase design, a sweep and a calibration.
//!
//! ```json
//! {
//!   "ris": { "preset": "large-ris1" },
//!   "tx_antenna": { "preset": "x-band-horn" },
//!   "rx_antenna": { "alpha": 62, "gain_dbi": 21 },
//!   "link": { "d1_m": 2, "theta_t_deg": 45, "phi_t_deg": 180,
//!             "d2_m": 100, "theta_r_deg": 45, "phi_r_deg": 0, "pt_dbm": 0 },
//!   "phase_design": { "kind": "uniform" },
//!   "sweep": { "mode": "distance_d2", "start_m": 5, "stop_m": 100, "step_m": 5,
//!              "regimes": ["general", "near_field_broadcast"] },
//!   "calibration": { "line_loss": 1.0 }
//! }
//! ```
//!
//! Every section is optional; commands complain about the ones they need.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use rispl_core::math::{deg, from_db};
use rispl_core::pathloss::{self, BroadcastDesign};
use rispl_core::presets::Preset;
use rispl_core::ris::{
    farfield_codebook, nearfield_broadcast_codebook, nearfield_focus_codebook, steering_gradients,
    two_beam_stripe_profile, uniform_profile,
};
use rispl_core::{
    Antenna, CosinePattern, Direction, LinkGeometry, PhaseProfile, PowerResult, Regime, RisConfig, SphericalPlacement,
};

use crate::error::{Error, Result};
use crate::profile_csv;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    ris: Option<SurfaceSection>,
    tx_antenna: Option<AntennaSection>,
    rx_antenna: Option<AntennaSection>,
    link: Option<LinkSection>,
    sweep: Option<SweepSection>,
    phase_design: Option<DesignSection>,
    calibration: Option<CalibrationSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceSection {
    preset: Option<String>,
    rows: Option<usize>,
    cols: Option<usize>,
    pitch_x_m: Option<f64>,
    pitch_y_m: Option<f64>,
    amplitude: Option<f64>,
    wavelength_m: Option<f64>,
    frequency_hz: Option<f64>,
    cell_alpha: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntennaSection {
    preset: Option<String>,
    alpha: Option<f64>,
    gain: Option<f64>,
    gain_dbi: Option<f64>,
    main_lobe_half_width_deg: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkSection {
    d1_m: f64,
    theta_t_deg: f64,
    phi_t_deg: f64,
    d2_m: f64,
    theta_r_deg: f64,
    phi_r_deg: f64,
    #[serde(default)]
    pt_dbm: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DesignSection {
    Uniform {
        #[serde(default)]
        phase_deg: f64,
    },
    Farfield {
        theta_des_deg: f64,
        phi_des_deg: f64,
    },
    NearfieldFocus,
    NearfieldBroadcast {
        theta_des_deg: f64,
        phi_des_deg: f64,
    },
    Stripe,
    Csv {
        path: PathBuf,
    },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SweepModeName {
    DistanceD2,
    DistanceD1,
    AngularHeatmap,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    mode: SweepModeName,
    start_m: Option<f64>,
    stop_m: Option<f64>,
    step_m: Option<f64>,
    resolution_deg: Option<f64>,
    regimes: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibrationSection {
    line_loss: Option<f64>,
    composite: Option<f64>,
    outlier_threshold_db: Option<f64>,
}

/// How the per-cell phases are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseDesign {
    /// All cells at this phase (rad).
    Uniform(f64),
    /// Linear gradient steering the incident plane wave to a direction.
    FarField(Direction),
    /// Focus on the link's receiver.
    NearFieldFocus,
    /// Near-field broadcast towards a direction via a virtual transmitter.
    NearFieldBroadcast(Direction),
    /// Four-column 0/π stripes: two beams.
    Stripe,
    /// A fixed profile, read from file.
    Fixed(PhaseProfile),
}

impl PhaseDesign {
    /// The profile this design produces for `link`. Designs that depend on
    /// the terminals are rebuilt for every link.
    pub fn profile(&self, cfg: &RisConfig, link: &LinkGeometry) -> Result<PhaseProfile> {
        Ok(match self {
            PhaseDesign::Uniform(p) => uniform_profile(cfg, *p),
            PhaseDesign::FarField(d) => farfield_codebook(cfg, link.tx.direction(), *d),
            PhaseDesign::NearFieldFocus => nearfield_focus_codebook(cfg, link.tx_point(), link.rx_point()),
            PhaseDesign::NearFieldBroadcast(d) => {
                nearfield_broadcast_codebook(cfg, link.tx_point(), link.tx.distance(), *d)
            }
            PhaseDesign::Stripe => two_beam_stripe_profile(cfg),
            PhaseDesign::Fixed(p) => {
                p.check_matches(cfg)?;
                p.clone()
            }
        })
    }

    /// Phase gradients for the far-field closed form, if the design is a
    /// linear ramp.
    pub fn farfield_gradients(&self, link: &LinkGeometry) -> Option<(f64, f64)> {
        match self {
            PhaseDesign::Uniform(_) => Some((0.0, 0.0)),
            PhaseDesign::FarField(d) => Some(steering_gradients(link.tx.direction(), *d)),
            _ => None,
        }
    }

    /// The broadcast pattern the design produces, if it is one.
    pub fn broadcast(&self) -> Option<BroadcastDesign> {
        match self {
            PhaseDesign::Uniform(_) => Some(BroadcastDesign::Specular),
            PhaseDesign::FarField(d) | PhaseDesign::NearFieldBroadcast(d) => Some(BroadcastDesign::Steered(*d)),
            PhaseDesign::Stripe => Some(BroadcastDesign::TwoBeamStripe),
            _ => None,
        }
    }
}

/// Sweep axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepMode {
    /// `d2` from `start` to `stop` in `step`, `d1` from the link.
    DistanceD2 { start: f64, stop: f64, step: f64 },
    /// `d1` from `start` to `stop` in `step`, `d2` from the link.
    DistanceD1 { start: f64, stop: f64, step: f64 },
    /// Receiver over `θ ∈ [0°, 90°]`, `φ ∈ [0°, 360°)` at this resolution (deg).
    AngularHeatmap { resolution_deg: f64 },
}

/// What to sweep and which formulas to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Axis definition.
    pub mode: SweepMode,
    /// Formulas evaluated at every point; heatmaps always use the general one.
    pub regimes: Vec<Regime>,
}

impl SweepSpec {
    /// Checks `step > 0`, `start < stop` and a usable resolution.
    pub fn validate(&self) -> Result<()> {
        match self.mode {
            SweepMode::DistanceD1 { start, stop, step } | SweepMode::DistanceD2 { start, stop, step } => {
                if !(step > 0.0 && step.is_finite()) {
                    return Err(Error::Invalid("sweep step must be positive".into()));
                }
                if !(start > 0.0 && start < stop && stop.is_finite()) {
                    return Err(Error::Invalid("sweep needs 0 < start < stop".into()));
                }
            }
            SweepMode::AngularHeatmap { resolution_deg } => {
                if !(resolution_deg > 0.0 && resolution_deg <= 90.0) {
                    return Err(Error::Invalid("heatmap resolution must be in (0°, 90°]".into()));
                }
            }
        }
        if self.regimes.is_empty() {
            return Err(Error::Invalid("sweep needs at least one regime".into()));
        }
        Ok(())
    }

    /// Axis points, computed as `start + i·step` so they do not drift.
    pub fn distances(&self) -> Vec<f64> {
        match self.mode {
            SweepMode::DistanceD1 { start, stop, step } | SweepMode::DistanceD2 { start, stop, step } => {
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| start + i as f64 * step).collect()
            }
            SweepMode::AngularHeatmap { .. } => Vec::new(),
        }
    }
}

/// How model predictions are brought in line with a measurement setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Calibration {
    /// Cable loss `G_lineloss ≤ 1`, multiplied into the prediction.
    LineLoss(f64),
    /// Measured `G_t G_r A_r G_lineloss` (m²), replacing the model's
    /// `G_t G_r A_r` with `A_r = G_r λ² / 4π`.
    Composite(f64),
}

impl Calibration {
    /// Linear factor applied to a predicted power.
    pub fn factor(&self, cfg: &RisConfig, link: &LinkGeometry) -> f64 {
        match *self {
            Calibration::LineLoss(g) => g,
            Calibration::Composite(c) => {
                let gr = link.rx_antenna.gain();
                let aperture = gr * cfg.wavelength() * cfg.wavelength() / (4.0 * std::f64::consts::PI);
                c / (link.tx_antenna.gain() * gr * aperture)
            }
        }
    }
}

/// Calibration plus the outlier threshold used when comparing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationSpec {
    /// Prediction correction.
    pub calibration: Calibration,
    /// Residuals beyond this (dB) are flagged.
    pub outlier_threshold_db: f64,
}

impl Default for CalibrationSpec {
    fn default() -> Self {
        Self { calibration: Calibration::LineLoss(1.0), outlier_threshold_db: 5.0 }
    }
}

/// A fully resolved scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// The surface.
    pub ris: RisConfig,
    /// Transmitter and receiver placement and antennas.
    pub link: Option<LinkGeometry>,
    /// Transmit power (W).
    pub transmit_power: f64,
    /// Phase design.
    pub design: PhaseDesign,
    /// Optional sweep.
    pub sweep: Option<SweepSpec>,
    /// Measurement calibration.
    pub calibration: CalibrationSpec,
}

fn preset(name: &str) -> Result<Preset> {
    name.parse::<Preset>().map_err(|e| Error::Invalid(format!("`{name}`: {e}")))
}

fn build_surface(s: &SurfaceSection) -> Result<RisConfig> {
    let base = match &s.preset {
        Some(name) => Some(
            preset(name)?
                .surface()
                .ok_or_else(|| Error::Invalid(format!("`{name}` is an antenna preset, not a surface")))?,
        ),
        None => None,
    };
    let need = |v: Option<usize>, f: fn(&RisConfig) -> usize, what: &str| -> Result<usize> {
        v.or(base.as_ref().map(f)).ok_or_else(|| Error::Invalid(format!("ris: missing `{what}`")))
    };
    let needf = |v: Option<f64>, f: fn(&RisConfig) -> f64, what: &str| -> Result<f64> {
        v.or(base.as_ref().map(f)).ok_or_else(|| Error::Invalid(format!("ris: missing `{what}`")))
    };
    let rows = need(s.rows, RisConfig::rows, "rows")?;
    let cols = need(s.cols, RisConfig::cols, "cols")?;
    let px = needf(s.pitch_x_m, RisConfig::pitch_x, "pitch_x_m")?;
    let py = needf(s.pitch_y_m, RisConfig::pitch_y, "pitch_y_m")?;
    let mut cfg = match (s.wavelength_m, s.frequency_hz) {
        (Some(l), f) => {
            let c = RisConfig::new(rows, cols, px, py, l)?;
            match f {
                Some(f) => c.with_frequency(f)?,
                None => c,
            }
        }
        (None, Some(f)) => RisConfig::from_frequency(rows, cols, px, py, f)?,
        (None, None) => {
            let b = base.as_ref().ok_or_else(|| Error::Invalid("ris: give `wavelength_m` or `frequency_hz`".into()))?;
            let c = RisConfig::new(rows, cols, px, py, b.wavelength())?;
            match b.frequency() {
                Some(f) => c.with_frequency(f)?,
                None => c,
            }
        }
    };
    let pattern = match s.cell_alpha {
        Some(a) => CosinePattern::new(a)?,
        None => base.as_ref().map(|b| *b.cell_pattern()).unwrap_or(CosinePattern::CELL),
    };
    cfg = cfg.with_cell_pattern(pattern);
    let amplitude = s.amplitude.or(base.as_ref().map(RisConfig::amplitude)).unwrap_or(1.0);
    Ok(cfg.with_amplitude(amplitude)?)
}

fn build_antenna(s: &AntennaSection, fallback: Antenna) -> Result<Antenna> {
    let base = match &s.preset {
        Some(name) => Some(preset(name)?.antenna()),
        None => None,
    };
    let pattern = match (s.alpha, base) {
        (Some(a), _) => CosinePattern::new(a)?,
        (None, Some(b)) => b.pattern,
        (None, None) => fallback.pattern,
    };
    let mut ant = match (s.gain, s.gain_dbi) {
        (Some(_), Some(_)) => return Err(Error::Invalid("antenna: give `gain` or `gain_dbi`, not both".into())),
        (Some(g), None) => Antenna::new(pattern, g)?,
        (None, Some(db)) => Antenna::new(pattern, from_db(db))?,
        (None, None) if s.alpha.is_some() => Antenna::with_derived_gain(pattern),
        (None, None) => base.unwrap_or(fallback),
    };
    if let Some(w) = s.main_lobe_half_width_deg {
        ant = ant.with_main_lobe_half_width(deg(w))?;
    }
    Ok(ant)
}

fn placement(d: f64, theta: f64, phi: f64, which: &str) -> Result<SphericalPlacement> {
    SphericalPlacement::from_degrees(d, theta, phi).map_err(|e| Error::Invalid(format!("link {which}: {e}")))
}

fn regimes(names: &[String]) -> Result<Vec<Regime>> {
    names.iter().map(|n| parse_regime(n).ok_or_else(|| Error::Invalid(format!("unknown regime `{n}`")))).collect()
}

/// Accepts `far_field` and `far-field` alike.
pub fn parse_regime(name: &str) -> Option<Regime> {
    Regime::from_label(&name.replace('-', "_"))
}

impl Scenario {
    /// A scenario with just a surface; terminals use the surface's horn.
    pub fn from_preset(name: &str) -> Result<Self> {
        let ris = preset(name)?
            .surface()
            .ok_or_else(|| Error::Invalid(format!("`{name}` is an antenna preset, not a surface")))?;
        Ok(Self {
            ris,
            link: None,
            transmit_power: 1e-3,
            design: PhaseDesign::Uniform(0.0),
            sweep: None,
            calibration: CalibrationSpec::default(),
        })
    }

    /// Reads and resolves a scenario file. Relative profile paths are taken
    /// relative to the file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Resolves scenario JSON; `origin` names the source in messages and
    /// anchors relative paths.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| Error::Parse { path: origin.into(), msg: e.to_string() })?;
        let surface = file.ris.as_ref().ok_or_else(|| Error::Invalid("scenario has no `ris` section".into()))?;
        let ris = build_surface(surface)?;
        let horn = surface
            .preset
            .as_deref()
            .map(preset)
            .transpose()?
            .map(Preset::antenna)
            .unwrap_or_else(|| Antenna::with_derived_gain(CosinePattern::CELL));
        let tx_antenna = build_antenna(file.tx_antenna.as_ref().unwrap_or(&AntennaSection::default()), horn)?;
        let rx_antenna = build_antenna(file.rx_antenna.as_ref().unwrap_or(&AntennaSection::default()), horn)?;

        let (link, transmit_power) = match &file.link {
            Some(l) => {
                let tx = placement(l.d1_m, l.theta_t_deg, l.phi_t_deg, "transmitter")?;
                let rx = placement(l.d2_m, l.theta_r_deg, l.phi_r_deg, "receiver")?;
                if !l.pt_dbm.is_finite() {
                    return Err(Error::Invalid("link: `pt_dbm` must be finite".into()));
                }
                (Some(LinkGeometry::new(tx, rx, tx_antenna, rx_antenna)), from_db(l.pt_dbm) * 1e-3)
            }
            None => (None, 1e-3),
        };

        let base_dir = origin.parent().unwrap_or(Path::new("."));
        let design = match file.phase_design.unwrap_or(DesignSection::Uniform { phase_deg: 0.0 }) {
            DesignSection::Uniform { phase_deg } => PhaseDesign::Uniform(deg(phase_deg)),
            DesignSection::Farfield { theta_des_deg, phi_des_deg } => {
                PhaseDesign::FarField(direction(theta_des_deg, phi_des_deg)?)
            }
            DesignSection::NearfieldFocus => PhaseDesign::NearFieldFocus,
            DesignSection::NearfieldBroadcast { theta_des_deg, phi_des_deg } => {
                PhaseDesign::NearFieldBroadcast(direction(theta_des_deg, phi_des_deg)?)
            }
            DesignSection::Stripe => PhaseDesign::Stripe,
            DesignSection::Csv { path } => {
                let p = base_dir.join(path);
                let profile = profile_csv::read_profile(&p, ris.rows(), ris.cols())?;
                PhaseDesign::Fixed(profile)
            }
        };

        let sweep = match file.sweep {
            Some(s) => {
                let need =
                    |v: Option<f64>, what: &str| v.ok_or_else(|| Error::Invalid(format!("sweep: missing `{what}`")));
                let mode = match s.mode {
                    SweepModeName::DistanceD2 => SweepMode::DistanceD2 {
                        start: need(s.start_m, "start_m")?,
                        stop: need(s.stop_m, "stop_m")?,
                        step: need(s.step_m, "step_m")?,
                    },
                    SweepModeName::DistanceD1 => SweepMode::DistanceD1 {
                        start: need(s.start_m, "start_m")?,
                        stop: need(s.stop_m, "stop_m")?,
                        step: need(s.step_m, "step_m")?,
                    },
                    SweepModeName::AngularHeatmap => {
                        SweepMode::AngularHeatmap { resolution_deg: s.resolution_deg.unwrap_or(1.0) }
                    }
                };
                let regimes = match &s.regimes {
                    Some(r) => regimes(r)?,
                    None => vec![Regime::General],
                };
                let spec = SweepSpec { mode, regimes };
                spec.validate()?;
                Some(spec)
            }
            None => None,
        };

        let calibration = match file.calibration {
            Some(c) => {
                let calibration = match (c.line_loss, c.composite) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Invalid("calibration: give `line_loss` or `composite`, not both".into()))
                    }
                    (Some(g), None) if g > 0.0 && g <= 1.0 => Calibration::LineLoss(g),
                    (Some(_), None) => return Err(Error::Invalid("calibration: `line_loss` must be in (0, 1]".into())),
                    (None, Some(c)) if c > 0.0 && c.is_finite() => Calibration::Composite(c),
                    (None, Some(_)) => return Err(Error::Invalid("calibration: `composite` must be positive".into())),
                    (None, None) => Calibration::LineLoss(1.0),
                };
                let outlier_threshold_db = c.outlier_threshold_db.unwrap_or(5.0);
                if outlier_threshold_db.is_nan() || outlier_threshold_db <= 0.0 {
                    return Err(Error::Invalid("calibration: `outlier_threshold_db` must be positive".into()));
                }
                CalibrationSpec { calibration, outlier_threshold_db }
            }
            None => CalibrationSpec::default(),
        };

        Ok(Self { ris, link, transmit_power, design, sweep, calibration })
    }

    /// The link, or an error naming the command that needed it.
    pub fn require_link(&self) -> Result<&LinkGeometry> {
        self.link.as_ref().ok_or_else(|| Error::Invalid("scenario has no `link` section".into()))
    }

    /// Evaluates one formula on `link` with the scenario's design.
    pub fn evaluate(&self, regime: Regime, link: &LinkGeometry, profile: &PhaseProfile) -> Result<PowerResult> {
        let p_t = self.transmit_power;
        let cfg = &self.ris;
        Ok(match regime {
            Regime::General => pathloss::received_power_general(cfg, profile, link, p_t)?,
            Regime::FarField => {
                let deltas = self.design.farfield_gradients(link).ok_or_else(|| {
                    Error::Invalid("far_field needs a uniform or far-field (linear) phase design".into())
                })?;
                pathloss::received_power_farfield(cfg, link, deltas, p_t)
            }
            Regime::NearFieldBeam => pathloss::received_power_nearfield_beam(cfg, profile, link, p_t)?,
            Regime::NearFieldBroadcast => {
                let design = self.design.broadcast().ok_or_else(|| {
                    Error::Invalid("near_field_broadcast needs a uniform, steered or stripe phase design".into())
                })?;
                pathloss::received_power_nearfield_broadcast(cfg, link, design, p_t)
            }
        })
    }
}

fn direction(theta_deg: f64, phi_deg: f64) -> Result<Direction> {
    if !(0.0..=90.0).contains(&theta_deg) || !phi_deg.is_finite() {
        return Err(Error::Invalid(format!("direction ({theta_deg}°, {phi_deg}°) is not above the surface")));
    }
    Ok(Direction::from_degrees(theta_deg, phi_deg))
}
