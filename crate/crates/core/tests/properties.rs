use std::f64::consts::{FRAC_PI_2, PI, TAU};

use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rispl_core::geometry::{cell_distance, mirror_image};
use rispl_core::pathloss::{
    array_factor, nearfield_beam_max, pathloss_nearfield_broadcast, received_power_farfield, received_power_general,
};
use rispl_core::ris::{farfield_codebook, nearfield_focus_codebook, steering_gradients, uniform_profile};
use rispl_core::{
    presets, Antenna, Complex64, CosinePattern, Direction, LinkGeometry, PhaseProfile, RisConfig, SphericalPlacement,
};

fn even(max_half: usize) -> impl Strategy<Value = usize> {
    (1..=max_half).prop_map(|h| 2 * h)
}

fn surface() -> impl Strategy<Value = RisConfig> {
    (even(8), even(8), 0.2f64..0.6, 0.2f64..0.6, 0.5f64..1.0).prop_map(|(n, m, px, py, a)| {
        // Pitches are given in wavelengths.
        let lambda = 0.03;
        RisConfig::new(n, m, px * lambda, py * lambda, lambda).unwrap().with_amplitude(a).unwrap()
    })
}

fn placement(dmin: f64, dmax: f64) -> impl Strategy<Value = SphericalPlacement> {
    (dmin..dmax, 0.0..1.45f64, 0.0..TAU).prop_map(|(d, t, p)| SphericalPlacement::new(d, t, p).unwrap())
}

fn antenna() -> impl Strategy<Value = Antenna> {
    (0.0f64..30.0).prop_map(|a| Antenna::with_derived_gain(CosinePattern::new(a).unwrap()))
}

fn random_profile(cfg: &RisConfig, seed: u64) -> PhaseProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PhaseProfile::from_fn(cfg, |_, _| rng.gen_range(0.0..TAU))
}

// Direct evaluation of the double sum with the cell centres written out
// from scratch: x = (m − ½) d_x, y = (n − ½) d_y.
fn brute_force_array_factor(cfg: &RisConfig, u: f64, v: f64) -> Complex64 {
    let (m_half, n_half) = ((cfg.cols() / 2) as i32, (cfg.rows() / 2) as i32);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in (1 - m_half)..=m_half {
        for n in (1 - n_half)..=n_half {
            acc += Complex64::from_polar(1.0, (m as f64 - 0.5) * u + (n as f64 - 0.5) * v);
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn placement_round_trips(p in placement(0.01, 1e4)) {
        let back = p.to_point().to_placement().unwrap();
        prop_assert!((back.distance() - p.distance()).abs() <= 1e-12 * p.distance());
        prop_assert!((back.elevation() - p.elevation()).abs() < 1e-9);
        if p.elevation() > 1e-6 {
            let dphi = (back.azimuth() - p.azimuth()).rem_euclid(TAU);
            prop_assert!(dphi.min(TAU - dphi) < 1e-9);
        }
    }

    #[test]
    fn cell_paths_obey_triangle_inequality(cfg in surface(), tx in placement(0.05, 50.0), rx in placement(0.05, 50.0)) {
        let (t, r) = (tx.to_point(), rx.to_point());
        let direct = (t - r).norm();
        for (_, c) in cfg.cells() {
            prop_assert!(cell_distance(t, c) + cell_distance(r, c) >= direct * (1.0 - 1e-12));
            prop_assert!((cell_distance(mirror_image(t), c) - cell_distance(t, c)).abs() <= 1e-12 * cell_distance(t, c));
        }
    }

    #[test]
    fn array_factor_matches_double_sum(
        cfg in surface(),
        ti in 0.0..FRAC_PI_2, pi in 0.0..TAU, tr in 0.0..FRAC_PI_2, pr in 0.0..TAU,
        d1 in -1.0f64..1.0, d2 in -1.0f64..1.0,
    ) {
        let (inc, obs) = (Direction::new(ti, pi), Direction::new(tr, pr));
        let beta = array_factor(&cfg, inc, obs, (d1, d2));
        let k = cfg.wavenumber();
        let u = k * (ti.sin() * pi.cos() + tr.sin() * pr.cos() + d1) * cfg.pitch_x();
        let v = k * (ti.sin() * pi.sin() + tr.sin() * pr.sin() + d2) * cfg.pitch_y();
        let oracle = brute_force_array_factor(&cfg, u, v);
        let scale = cfg.cell_count() as f64;
        prop_assert!(oracle.im.abs() < 1e-9 * scale);
        prop_assert!((beta - oracle.re).abs() < 1e-9 * scale, "{} vs {}", beta, oracle.re);
    }

    #[test]
    fn swapping_ends_is_reciprocal(
        cfg in surface(), tx in placement(0.2, 30.0), rx in placement(0.2, 30.0),
        a in antenna(), b in antenna(), seed in any::<u64>(),
    ) {
        let link = LinkGeometry::new(tx, rx, a, b);
        let prof = random_profile(&cfg, seed);
        let p = received_power_general(&cfg, &prof, &link, 1.0).unwrap().received_power;
        let q = received_power_general(&cfg, &prof, &link.swapped(), 1.0).unwrap().received_power;
        prop_assert!((p - q).abs() <= 1e-12 * p, "{} vs {}", p, q);
    }

    #[test]
    fn focusing_dominates_random_profiles(
        cfg in surface(), tx in placement(0.2, 5.0), rx in placement(0.2, 5.0), seed in any::<u64>(),
    ) {
        let link = LinkGeometry::new(tx, rx, presets::c_band_horn(), presets::c_band_horn());
        let focus = nearfield_focus_codebook(&cfg, tx.to_point(), rx.to_point());
        let best = received_power_general(&cfg, &focus, &link, 1.0).unwrap().received_power;
        let bound = nearfield_beam_max(&cfg, &link, 1.0).unwrap().received_power;
        prop_assert!((best - bound).abs() <= 1e-10 * bound);
        let other = received_power_general(&cfg, &random_profile(&cfg, seed), &link, 1.0).unwrap().received_power;
        prop_assert!(other <= best * (1.0 + 1e-12));
        prop_assert!(focus.phases().iter().all(|p| (0.0..TAU).contains(p)));
    }

    #[test]
    fn broadcast_loss_depends_only_on_total_distance(
        s in 1.0f64..200.0, frac in 0.05f64..0.95, scale in 1.1f64..4.0,
    ) {
        let mk = |d1: f64, d2: f64| LinkGeometry::new(
            SphericalPlacement::new(d1, 0.7, PI).unwrap(),
            SphericalPlacement::new(d2, 0.7, 0.0).unwrap(),
            presets::x_band_horn(),
            presets::x_band_horn(),
        );
        let cfg = presets::large_ris1();
        let a = pathloss_nearfield_broadcast(&cfg, &mk(frac * s, (1.0 - frac) * s));
        let b = pathloss_nearfield_broadcast(&cfg, &mk(0.5 * s, 0.5 * s));
        prop_assert!((a - b).abs() <= 1e-12 * a);
        let c = pathloss_nearfield_broadcast(&cfg, &mk(scale * frac * s, scale * (1.0 - frac) * s));
        prop_assert!((c / a - scale * scale).abs() <= 1e-12 * scale * scale);
    }
}

// The general sum tends to the far-field closed form as both legs grow.
#[test]
fn general_converges_to_farfield() {
    let cfg = presets::small_ris();
    let inc = Direction::new(PI / 4.0, PI);
    let obs = Direction::new(PI / 6.0, 0.0);
    let prof = farfield_codebook(&cfg, inc, obs);
    let mut last = f64::INFINITY;
    for d in [5.0, 20.0, 80.0, 320.0] {
        let link = LinkGeometry::new(
            SphericalPlacement::new(d, inc.elevation, inc.azimuth).unwrap(),
            SphericalPlacement::new(d, obs.elevation, obs.azimuth).unwrap(),
            presets::c_band_horn(),
            presets::c_band_horn(),
        );
        let g = received_power_general(&cfg, &prof, &link, 1.0).unwrap().received_power;
        let f = received_power_farfield(&cfg, &link, steering_gradients(inc, obs), 1.0).received_power;
        let gap = (10.0 * (g / f).log10()).abs();
        assert!(gap < last, "gap grew at d = {d}: {gap}");
        last = gap;
    }
    assert!(last < 0.01, "{last}");
}

// Uniform phase of any value is the same mirror.
#[test]
fn common_phase_is_irrelevant() {
    let cfg = presets::small_ris();
    let link = LinkGeometry::new(
        SphericalPlacement::new(2.0, 0.6, 3.0).unwrap(),
        SphericalPlacement::new(4.0, 0.4, 0.2).unwrap(),
        presets::c_band_horn(),
        presets::c_band_horn(),
    );
    let a = received_power_general(&cfg, &uniform_profile(&cfg, 0.0), &link, 1.0).unwrap();
    let b = received_power_general(&cfg, &uniform_profile(&cfg, 2.1), &link, 1.0).unwrap();
    assert_relative_eq!(a.received_power, b.received_power, max_relative = 1e-12);
    assert_relative_eq!(a.path_loss * a.received_power, 1.0, max_relative = 1e-12);
}
