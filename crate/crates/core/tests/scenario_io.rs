//! Scenario files, the built-in catalog and serialization round trips.

use std::path::PathBuf;

use proptest::prelude::*;
use rwa_ntn::scenario::{
    builtin, builtin_catalog, builtin_file, builtin_ids, expand_constellation, load_catalog, load_scenario,
    parse_catalog, serialize_scenario, ScenarioError,
};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/scenarios")
}

#[test]
fn shipped_files_match_builtins() {
    for id in builtin_ids() {
        let path = data_dir().join(format!("{id}.json"));
        let loaded = load_scenario(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(Some(loaded), builtin(&id), "{id}");
    }
}

#[test]
fn catalog_lists_six_scenarios() {
    let ids = builtin_ids();
    assert_eq!(ids, ["scenario-6", "scenario-7", "scenario-11", "scenario-15a", "scenario-15b", "scenario-19"]);
    assert_eq!(builtin_catalog().len(), 6);
}

#[test]
fn constellation_sizes() {
    let file = builtin_file();
    let counts: Vec<_> = file.constellations.iter().map(|c| (c.name.as_str(), expand_constellation(c).len())).collect();
    assert_eq!(counts, [("GEO", 1), ("MEO", 24), ("LEO-1", 288), ("LEO-2", 264)]);
}

#[test]
fn in_plane_phase_separation() {
    for c in builtin_file().constellations {
        let sats = expand_constellation(&c);
        let per_plane = c.sats_per_plane as usize;
        for plane in sats.chunks(per_plane) {
            for pair in plane.windows(2) {
                let gap = (pair[1].arg_latitude_deg - pair[0].arg_latitude_deg).rem_euclid(360.0);
                assert!((gap - 360.0 / per_plane as f64).abs() < 1e-9, "{}: {gap}", c.name);
            }
        }
    }
}

#[test]
fn whole_catalog_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.json");
    std::fs::write(&path, serde_json::to_string(&builtin_file()).unwrap()).unwrap();
    assert_eq!(load_catalog(&path).unwrap(), builtin_catalog());
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_scenario("/nonexistent/scenario.json").unwrap_err();
    assert!(matches!(err, ScenarioError::Io { .. }), "{err}");
}

#[test]
fn malformed_json_is_a_parse_error() {
    assert!(matches!(parse_catalog("{\"aircraft\": [").unwrap_err(), ScenarioError::Parse(_)));
}

#[test]
fn validation_errors_name_the_field() {
    let mut spec = builtin("scenario-15b").unwrap();
    spec.handover_threshold_deg = 90.0;
    let err = parse_catalog(&serialize_scenario(&spec)).unwrap_err();
    match err {
        ScenarioError::Validation { field, .. } => assert!(field.contains("handover_threshold"), "{field}"),
        other => panic!("unexpected {other}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn serialize_then_load_is_identity(
        which in 0usize..6,
        duration_scale in 0.1f64..1.0,
        threshold in 10.0f64..60.0,
        rain_scale in 0.0f64..3.0,
        power_offset in -10.0f64..10.0,
        seed_phase in 0.0f64..20.0,
    ) {
        let id = &builtin_ids()[which];
        let mut spec = builtin(id).unwrap();
        spec.duration_h *= duration_scale;
        spec.handover_threshold_deg = threshold;
        spec.rain_profile = spec.rain_profile.scaled(rain_scale);
        spec.phy.blade_phase_ms = seed_phase;
        for a in &mut spec.aircraft.antennas {
            a.tx_power_dbw += power_offset;
        }
        let text = serialize_scenario(&spec);
        let back = parse_catalog(&text).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(&back[0], &spec);
        // and once more through a file
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(&path, &text).unwrap();
        prop_assert_eq!(load_scenario(&path).unwrap(), spec);
    }
}
