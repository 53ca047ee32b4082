//! Orbit propagation, look angles and the serving-satellite timeline.

use proptest::prelude::*;
use rwa_ntn::orbit::{
    self, all_views, build_access_timeline, doppler_shift, eci_to_ecef, look_angles, propagate, GeodeticPosition,
    KeplerianElements, MU_EARTH_KM3_S2,
};
use rwa_ntn::scenario::builtin_catalog;

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

proptest! {
    #[test]
    fn radius_and_speed_are_conserved(
        alt in 300.0f64..40_000.0,
        inc in 0.0f64..180.0,
        raan in 0.0f64..360.0,
        u0 in 0.0f64..360.0,
        t in 0.0f64..200_000.0,
    ) {
        let el = KeplerianElements::circular(alt, inc, raan, u0);
        let a = el.semi_major_axis_km;
        let s = propagate(&el, t);
        let r = norm(s.position);
        prop_assert!(((r - a) / a).abs() < 1e-6);
        prop_assert!(r > orbit::EARTH_RADIUS_KM);
        let v = norm(s.velocity);
        prop_assert!(((v - (MU_EARTH_KM3_S2 / r).sqrt()) / v).abs() < 1e-6);
        // the Earth-fixed position is a rotation of the inertial one
        let e = eci_to_ecef(&s, t, 0.0);
        prop_assert!(((norm(e.position) - r) / r).abs() < 1e-12);
    }

    #[test]
    fn look_angles_stay_in_domain(
        lat in -89.0f64..89.0,
        lon in -180.0f64..180.0,
        inc in 0.0f64..180.0,
        u0 in 0.0f64..360.0,
        t in 0.0f64..10_000.0,
    ) {
        let el = KeplerianElements::circular(1050.0, inc, 0.0, u0);
        let sat = eci_to_ecef(&propagate(&el, t), t, 0.0);
        let v = look_angles(&GeodeticPosition::new(lat, lon, 0.0), &sat);
        prop_assert!((-90.0..=90.0).contains(&v.elevation_deg));
        prop_assert!((0.0..360.0).contains(&v.azimuth_deg));
        prop_assert!(v.slant_range_km > 0.0);
    }

    #[test]
    fn doppler_is_antisymmetric(rr in -8.0f64..8.0, f in 1.0f64..40.0) {
        prop_assert_eq!(doppler_shift(-rr, f), -doppler_shift(rr, f));
    }
}

#[test]
fn range_rate_matches_differentiated_range() {
    // a stationary point and a moving aircraft
    for spec in builtin_catalog().into_iter().filter(|s| s.id == "scenario-6" || s.id == "scenario-19") {
        let elements = spec.constellation.expand();
        let timeline = build_access_timeline(&spec, 1.0);
        let mut checked = 0;
        for k in (1..timeline.samples.len() - 1).step_by(7) {
            let Some(id) = timeline.samples[k].satellite_id else { continue };
            let t = timeline.samples[k].time_s;
            let before = all_views(&elements, &spec, t - 1.0)[id].slant_range_km;
            let after = all_views(&elements, &spec, t + 1.0)[id].slant_range_km;
            let numeric = (after - before) / 2.0;
            let reported = timeline.samples[k].view.unwrap().range_rate_km_s;
            assert!((numeric - reported).abs() < 1e-3, "{} t={t}: {numeric} vs {reported}", spec.id);
            checked += 1;
        }
        assert!(checked > 100);
    }
}

#[test]
fn serving_satellite_respects_threshold_and_handover_rule() {
    for spec in builtin_catalog() {
        let elements = spec.constellation.expand();
        let timeline = build_access_timeline(&spec, 2.0);
        for s in &timeline.samples {
            if let Some(v) = s.view {
                assert!(v.elevation_deg >= spec.handover_threshold_deg, "{} t={}", spec.id, s.time_s);
            }
        }
        for &k in &timeline.handovers {
            let s = &timeline.samples[k];
            let views = all_views(&elements, &spec, s.time_s);
            let best = views.iter().map(|v| v.elevation_deg).fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(s.view.unwrap().elevation_deg, best, "{} handover at t={}", spec.id, s.time_s);
        }
    }
}

#[test]
fn leo_access_is_nearly_continuous() {
    for spec in builtin_catalog().into_iter().filter(|s| s.constellation.name.starts_with("LEO")) {
        let pct = build_access_timeline(&spec, 2.0).access_percentage();
        assert!(pct >= 99.0, "{}: {pct}", spec.id);
    }
}

#[test]
fn geo_satellite_hardly_moves() {
    let spec = rwa_ntn::builtin("scenario-15b").unwrap();
    let timeline = build_access_timeline(&spec, 10.0);
    assert_eq!(timeline.access_percentage(), 100.0);
    assert!(timeline.handovers.is_empty());
}
