use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use rispl::measure::read_measurements;
use rispl::output::{self, dbm, fmt_db};
use rispl::scenario::parse_regime;
use rispl::sweep::evaluate_point;
use rispl::{compare_measurements, profile_csv, run_angular_heatmap, run_distance_sweep, Error, Result, Scenario};
use rispl::{SweepMode, SweepSpec};
use rispl_core::math::{deg, to_db};
use rispl_core::pathloss::{field_region, redefined_boundary, FieldRegion};
use rispl_core::presets::Preset;
use rispl_core::radiation::gain_from_pattern;
use rispl_core::ris::{power_consumption, CellTechnology};
use rispl_core::{CosinePattern, Direction, PhaseProfile, Regime};

/// Free-space path loss of RIS-assisted links.
#[derive(Debug, Parser)]
#[command(name = "rispl", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in preset: large-ris1, large-ris2, small-ris, x-band-horn, c-band-horn.
    /// With --config it replaces the scenario's surface.
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    /// Write results here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Machine-readable output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Pin,
    Varactor,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Peak gain of a cos^alpha pattern, by numerical integration.
    Gain {
        /// Pattern exponent (alternatively use --preset).
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Classic and redefined near/far-field boundaries.
    Boundary {
        /// Incidence elevation (deg); defaults to the link's, else 45.
        #[arg(long, value_name = "DEG")]
        theta_t: Option<f64>,
        /// Reflection elevation (deg); defaults to the link's, else 45.
        #[arg(long, value_name = "DEG")]
        theta_r: Option<f64>,
    },
    /// Received power and path loss for the scenario's link.
    Power {
        /// Formula(s) to evaluate: general, far_field, near_field_beam,
        /// near_field_broadcast. Default: all.
        #[arg(long = "regime", value_name = "REGIME")]
        regimes: Vec<String>,
        /// Override the transmitter distance (m).
        #[arg(long)]
        d1: Option<f64>,
        /// Override the receiver distance (m).
        #[arg(long)]
        d2: Option<f64>,
    },
    /// Write the phase profile of the scenario's design as CSV.
    PhaseDesign {
        /// Also compare the design against this many random profiles.
        #[arg(long, default_value_t = 0, value_name = "N")]
        dominance_trials: usize,
        /// Seed for the random profiles.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Distance sweep from the scenario's `sweep` section.
    Sweep {
        /// Override the sweep's regimes.
        #[arg(long = "regime", value_name = "REGIME")]
        regimes: Vec<String>,
    },
    /// Received power over receiver directions (general formula).
    Heatmap {
        /// Grid step (deg); defaults to the scenario's, else 1.
        #[arg(long, value_name = "DEG")]
        resolution: Option<f64>,
    },
    /// Compare measured received power with the model.
    Compare {
        /// Measurement CSV (`d1_m,d2_m,pr_dbm,tag`).
        #[arg(long, value_name = "PATH")]
        measurements: PathBuf,
        /// Formula to compare against.
        #[arg(long, default_value = "general", value_name = "REGIME")]
        regime: String,
    },
    /// Static power drawn by the surface's switching elements.
    PowerConsumption {
        /// Switching technology.
        #[arg(long, value_enum)]
        kind: Kind,
        /// Cells in the on state.
        #[arg(long)]
        n_on: usize,
        /// Total cells (bounds --n-on); taken from --preset if given.
        #[arg(long)]
        cells: Option<usize>,
    },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn preset(name: &str) -> Result<Preset> {
    name.parse().map_err(|e| invalid(format!("`{name}`: {e}")))
}

fn scenario(common: &Common) -> Result<Scenario> {
    match (&common.config, &common.preset) {
        (Some(path), p) => {
            let mut s = Scenario::load(path)?;
            if let Some(name) = p {
                let fresh = Scenario::from_preset(name)?;
                s.ris = fresh.ris;
            }
            Ok(s)
        }
        (None, Some(name)) => Scenario::from_preset(name),
        (None, None) => Err(invalid("this command needs --config or --preset")),
    }
}

fn regimes(names: &[String]) -> Result<Vec<Regime>> {
    names.iter().map(|n| parse_regime(n).ok_or_else(|| invalid(format!("unknown regime `{n}`")))).collect()
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path.as_path(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Error::io(Path::new("<stdout>"), e))
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serialisable");
    s.push('\n');
    s
}

// Four significant digits: 71.33, 4.796, 0.8666.
fn sig4(x: f64) -> String {
    let decimals = if x > 0.0 { (3 - x.log10().floor() as i32).max(0) as usize } else { 3 };
    format!("{x:.decimals$}")
}

fn region_name(r: FieldRegion) -> &'static str {
    match r {
        FieldRegion::Near => "near",
        FieldRegion::Far => "far",
    }
}

fn run(cli: Cli) -> Result<()> {
    let common = &cli.common;
    match cli.command {
        Command::Gain { alpha } => {
            let pattern = match (alpha, &common.preset) {
                (Some(a), None) => CosinePattern::new(a)?,
                (None, Some(name)) => {
                    let p = preset(name)?;
                    match p.surface() {
                        Some(cfg) => *cfg.cell_pattern(),
                        None => p.antenna().pattern,
                    }
                }
                _ => return Err(invalid("give exactly one of --alpha or --preset")),
            };
            let g = gain_from_pattern(&pattern);
            let text = match common.format {
                None => format!("{g:.6} linear, {:.4} dBi\n", to_db(g)),
                Some(Format::Csv) => {
                    format!("alpha,gain_linear,gain_dbi\n{},{g:.6},{:.6}\n", pattern.exponent(), to_db(g))
                }
                Some(Format::Json) => {
                    json_text(&json!({ "alpha": pattern.exponent(), "gain_linear": g, "gain_dbi": to_db(g) }))
                }
            };
            emit(common, &text)
        }

        Command::Boundary { theta_t, theta_r } => {
            let s = scenario(common)?;
            let cfg = &s.ris;
            let link_t = s.link.as_ref().map(|l| l.tx.elevation());
            let link_r = s.link.as_ref().map(|l| l.rx.elevation());
            let tt = theta_t.map(deg).or(link_t).unwrap_or(deg(45.0));
            let tr = theta_r.map(deg).or(link_r).unwrap_or(deg(45.0));
            for t in [tt, tr] {
                if !(0.0..=deg(90.0)).contains(&t) {
                    return Err(invalid("elevations must lie in [0°, 90°]"));
                }
            }
            let classic = rispl_core::pathloss::classic_boundary(cfg);
            let lb = redefined_boundary(cfg, Direction::new(tt, 0.0), Direction::new(tr, 0.0));
            let lower = 5.0 * cfg.wavelength();
            let regions = match (&s.link, theta_t.or(theta_r)) {
                (Some(link), None) => Some((field_region(cfg, link), link)),
                _ => None,
            };
            let text = match common.format {
                None => {
                    let mut t =
                        format!("classic {} m, L_bound {} m, lower bound {} m\n", sig4(classic), sig4(lb), sig4(lower));
                    if let Some((r, link)) = regions {
                        t += &format!(
                            "tx {} (d1 = {:.3} m), rx {} (d2 = {:.3} m)\n",
                            region_name(r.tx_region),
                            link.tx.distance(),
                            region_name(r.rx_region),
                            link.rx.distance()
                        );
                        if r.below_lower_bound {
                            t += "warning: a terminal is closer than 5 wavelengths to some cell\n";
                        }
                    }
                    t
                }
                Some(Format::Csv) => {
                    format!("classic_m,l_bound_m,lower_bound_m\n{classic:.6},{lb:.6},{lower:.6}\n")
                }
                Some(Format::Json) => {
                    let mut v = json!({ "classic_m": classic, "l_bound_m": lb, "lower_bound_m": lower });
                    if let Some((r, _)) = regions {
                        v["tx_region"] = json!(region_name(r.tx_region));
                        v["rx_region"] = json!(region_name(r.rx_region));
                        v["below_lower_bound"] = json!(r.below_lower_bound);
                    }
                    json_text(&v)
                }
            };
            emit(common, &text)
        }

        Command::Power { regimes: names, d1, d2 } => {
            let s = scenario(common)?;
            let mut link = *s.require_link()?;
            if let Some(d) = d1 {
                link = link.with_tx(link.tx.with_distance(d)?);
            }
            if let Some(d) = d2 {
                link = link.with_rx(link.rx.with_distance(d)?);
            }
            let rs = if names.is_empty() { Regime::ALL.to_vec() } else { regimes(&names)? };
            let rows = evaluate_point(&s, &link, &rs);
            let text = match common.format {
                Some(Format::Json) => json_text(&output::sweep_json(&rows)),
                _ => output::sweep_csv(&rows),
            };
            emit(common, &text)
        }

        Command::PhaseDesign { dominance_trials, seed } => {
            let s = scenario(common)?;
            let link = s.require_link()?;
            let profile = s.design.profile(&s.ris, link)?;
            let text = match common.format {
                Some(Format::Json) => json_text(&json!({
                    "rows": profile.rows(),
                    "cols": profile.cols(),
                    "phases_rad": profile.phases().chunks(profile.cols()).collect::<Vec<_>>(),
                })),
                _ => profile_csv::format_profile(&profile),
            };
            emit(common, &text)?;
            if dominance_trials > 0 {
                let power = |p: &PhaseProfile| -> Result<f64> {
                    Ok(rispl_core::pathloss::received_power_general(&s.ris, p, link, s.transmit_power)?.received_power)
                };
                let design = power(&profile)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut best = 0.0f64;
                let mut beaten = 0usize;
                for _ in 0..dominance_trials {
                    let r = PhaseProfile::from_fn(&s.ris, |_, _| rng.gen_range(0.0..std::f64::consts::TAU));
                    let p = power(&r)?;
                    best = best.max(p);
                    if p >= design {
                        beaten += 1;
                    }
                }
                eprintln!(
                    "design {} dBm; best of {dominance_trials} random profiles (seed {seed}) {} dBm; \
                     random profiles at or above the design: {beaten}",
                    fmt_db(dbm(design)),
                    fmt_db(dbm(best)),
                );
            }
            Ok(())
        }

        Command::Sweep { regimes: names } => {
            let s = scenario(common)?;
            let mut spec = s.sweep.clone().ok_or_else(|| invalid("scenario has no `sweep` section"))?;
            if let SweepMode::AngularHeatmap { .. } = spec.mode {
                return Err(invalid("the scenario describes a heatmap; use `heatmap`"));
            }
            if !names.is_empty() {
                spec.regimes = regimes(&names)?;
            }
            let rows = run_distance_sweep(&s, &spec)?;
            for r in &rows {
                if let Err(e) = &r.outcome {
                    eprintln!("flagged d1={} d2={} {}: {e}", r.d1, r.d2, r.regime.label());
                }
            }
            let text = match common.format {
                Some(Format::Json) => json_text(&output::sweep_json(&rows)),
                _ => output::sweep_csv(&rows),
            };
            emit(common, &text)
        }

        Command::Heatmap { resolution } => {
            let s = scenario(common)?;
            let res = resolution
                .or(match s.sweep {
                    Some(SweepSpec { mode: SweepMode::AngularHeatmap { resolution_deg }, .. }) => Some(resolution_deg),
                    _ => None,
                })
                .unwrap_or(1.0);
            let grid = run_angular_heatmap(&s, res)?;
            let text = match common.format {
                Some(Format::Json) => json_text(&output::heatmap_json(&grid)),
                _ => output::heatmap_csv(&grid),
            };
            emit(common, &text)
        }

        Command::Compare { measurements, regime } => {
            let s = scenario(common)?;
            let regime = parse_regime(&regime).ok_or_else(|| invalid(format!("unknown regime `{regime}`")))?;
            let records = read_measurements(&measurements)?;
            let report = compare_measurements(&records, &s, regime, &s.calibration)?;
            let text = match common.format {
                Some(Format::Json) => json_text(&output::comparison_json(&report)),
                _ => output::comparison_csv(&report),
            };
            emit(common, &text)
        }

        Command::PowerConsumption { kind, n_on, cells } => {
            let from_preset = match &common.preset {
                Some(name) => Some(
                    preset(name)?.surface().ok_or_else(|| invalid(format!("`{name}` is not a surface")))?.cell_count(),
                ),
                None => None,
            };
            let cells = match (cells, from_preset) {
                (Some(a), Some(b)) if a != b => return Err(invalid("--cells disagrees with --preset")),
                (a, b) => a.or(b).unwrap_or(n_on),
            };
            let tech = match kind {
                Kind::Pin => CellTechnology::PinDiode,
                Kind::Varactor => CellTechnology::Varactor,
            };
            let w = power_consumption(tech, n_on, cells)?;
            let text = match common.format {
                None => format!("{w:.6} W\n"),
                Some(Format::Csv) => {
                    format!("kind,n_on,cells,power_w\n{kind:?},{n_on},{cells},{w:.6}\n").to_lowercase()
                }
                Some(Format::Json) => json_text(&json!({ "n_on": n_on, "cells": cells, "power_w": w })),
            };
            emit(common, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
