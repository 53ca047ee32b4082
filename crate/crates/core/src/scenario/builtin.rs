//! The six shipped scenarios with their constellations and aircraft.
//!
//! Orbital elements, payloads and aircraft antennas come from published
//! constellation and airframe data. Values not published anywhere are marked
//! `calibrated` (terminal power or noise temperature back-solved so the
//! flight-average CNR lands on the reference figure, rotor geometry chosen so
//! the average blade interference time matches the reference) or `assumed`.
//! Epoch is t = 0 with the Greenwich sidereal angle at 0.

use super::*;
use crate::blades::RotorSpec;
use crate::phy::{Modulation, NtnBandName};

fn ka_payload(eirp: f64, hpbw: f64, gt: f64, beams: u32, antenna_type: PayloadAntennaType) -> RfPayloadSpec {
    RfPayloadSpec { band: Band::Ka, beam_eirp_dbw: eirp, hpbw_deg: hpbw, gt_dbk: gt, beams, antenna_type, noise_temperature_k: None }
}

/// LEO S-band payload: 5 dBi patch fed with 33 dBm, 400 K.
/// EIRP = 3 dBW + 5 dBi; G/T = 5 − 10·log10(400).
fn s_payload() -> RfPayloadSpec {
    RfPayloadSpec {
        band: Band::S,
        beam_eirp_dbw: 3.0 + 5.0,
        // assumed: broad pattern of a single patch
        hpbw_deg: 90.0,
        gt_dbk: 5.0 - 10.0 * 400f64.log10(),
        beams: 1,
        antenna_type: PayloadAntennaType::Patch,
        noise_temperature_k: Some(400.0),
    }
}

pub(super) fn constellations() -> Vec<ConstellationSpec> {
    vec![
        ConstellationSpec {
            name: "GEO".into(),
            altitude_km: 35786.0,
            planes: 1,
            inclinations_deg: vec![6.0],
            raans: RaanRule::List(vec![0.0]),
            sats_per_plane: 1,
            configuration: Configuration::Single,
            phasing_factor: 0,
            // assumed: node crossing mid-flight so the 2 h track is symmetric about the equator
            initial_arg_latitude_deg: -15.0,
            payloads: vec![
                ka_payload(58.1, 0.2, 12.3, 2, PayloadAntennaType::ParabolicReflector),
                // assumed: Ku comparison payload shares the Ka reflector figures
                RfPayloadSpec { band: Band::Ku, ..ka_payload(58.1, 0.2, 12.3, 2, PayloadAntennaType::ParabolicReflector) },
            ],
        },
        ConstellationSpec {
            name: "MEO".into(),
            altitude_km: 8063.0,
            planes: 4,
            inclinations_deg: vec![90.0, 90.0, 70.0, 70.0],
            raans: RaanRule::List(vec![0.0, 90.0, 45.0, 135.0]),
            sats_per_plane: 6,
            configuration: Configuration::Star,
            phasing_factor: 0,
            initial_arg_latitude_deg: 0.0,
            payloads: vec![ka_payload(62.0, 2.5, 10.8, 256, PayloadAntennaType::DirectRadiatingArray)],
        },
        ConstellationSpec {
            name: "LEO-1".into(),
            altitude_km: 1050.0,
            planes: 12,
            inclinations_deg: vec![89.0],
            raans: RaanRule::Spacing { start_deg: 0.0, step_deg: 15.0 },
            sats_per_plane: 24,
            configuration: Configuration::Star,
            phasing_factor: 0,
            initial_arg_latitude_deg: 0.0,
            payloads: vec![ka_payload(50.0, 4.6, 5.0, 64, PayloadAntennaType::DirectRadiatingArray), s_payload()],
        },
        ConstellationSpec {
            name: "LEO-2".into(),
            altitude_km: 720.0,
            planes: 12,
            inclinations_deg: vec![53.5],
            raans: RaanRule::Spacing { start_deg: 0.0, step_deg: 30.0 },
            sats_per_plane: 22,
            configuration: Configuration::Delta,
            phasing_factor: 0,
            initial_arg_latitude_deg: 0.0,
            payloads: vec![ka_payload(40.0, 2.4, 4.0, 6, PayloadAntennaType::DirectRadiatingArray), s_payload()],
        },
    ]
}

fn antenna(band: Band, antenna_type: AntennaType, bandwidth_mhz: f64, beamwidth_deg: Beamwidth, max_gain_dbi: f64) -> AircraftAntenna {
    AircraftAntenna {
        band,
        antenna_type,
        bandwidth_mhz,
        beamwidth_deg,
        max_gain_dbi,
        tx_power_dbw: 0.0,
        noise_temperature_k: 400.0,
        boresight_elevation_deg: 90.0,
        boresight_azimuth_deg: 0.0,
        steering_min_elevation_deg: 0.0,
    }
}

pub(super) fn aircraft() -> Vec<AircraftSpec> {
    vec![
        AircraftSpec {
            name: "UAV-1".into(),
            model: Some("DJI Matrice 30".into()),
            antennas: vec![AircraftAntenna {
                // calibrated
                tx_power_dbw: TX_UAV1_KA,
                ..antenna(Band::Ka, AntennaType::PatchArrayFixed, 30.0, Beamwidth::Single(26.2), 17.33)
            }],
            antenna_position: AntennaPosition::MainBody,
            rotor: None,
        },
        AircraftSpec {
            name: "UAV-2".into(),
            model: Some("AUS Alpha 900".into()),
            antennas: vec![AircraftAntenna {
                // calibrated
                tx_power_dbw: TX_UAV2_S,
                ..antenna(Band::S, AntennaType::PatchFixed, 30.0, Beamwidth::Single(89.8), 5.15)
            }],
            antenna_position: AntennaPosition::UnderBlades,
            // calibrated: t_int ≈ 1.6 ms and t_lnk ≈ 13.9 ms at the flight-average elevation
            rotor: Some(RotorSpec {
                n_blades: 3,
                blade_width_m: UAV2_BLADE_WIDTH_M,
                rotor_rpm: 1290.0,
                shaft_offset_m: 0.5,
                rotor_height_m: 0.15,
                tip_radius_m: 1.1,
                shaft_bearing_deg: None,
            }),
        },
        AircraftSpec {
            name: "UAM".into(),
            model: Some("EHang 216".into()),
            antennas: vec![AircraftAntenna {
                // calibrated
                noise_temperature_k: T_UAM_KA,
                ..antenna(Band::Ka, AntennaType::PhasedArraySteerable, 400.0, Beamwidth::Range([3.2, 4.4]), 36.26)
            }],
            antenna_position: AntennaPosition::MainBody,
            rotor: None,
        },
        AircraftSpec {
            name: "HELI".into(),
            model: Some("Airbus H135".into()),
            antennas: vec![
                AircraftAntenna {
                    // calibrated
                    tx_power_dbw: TX_HELI_KU,
                    ..antenna(Band::Ku, AntennaType::ParabolicSteerable, 36.0, Beamwidth::Single(2.0), 41.4)
                },
                AircraftAntenna {
                    // calibrated
                    tx_power_dbw: TX_HELI_KA,
                    noise_temperature_k: T_HELI_KA,
                    ..antenna(Band::Ka, AntennaType::PhasedArraySteerable, 400.0, Beamwidth::Range([3.2, 4.4]), 36.26)
                },
            ],
            antenna_position: AntennaPosition::UnderBlades,
            // rotor speed 1/3.2 of the Alpha 900; four blades
            rotor: Some(RotorSpec {
                n_blades: 4,
                blade_width_m: 0.3,
                rotor_rpm: 1290.0 / 3.2,
                shaft_offset_m: 4.0,
                rotor_height_m: 0.5,
                tip_radius_m: 5.1,
                shaft_bearing_deg: None,
            }),
        },
    ]
}

// Calibrated terminal figures (see the module docs).
const TX_UAV1_KA: f64 = 12.14;
const TX_UAV2_S: f64 = 24.76;
const T_UAM_KA: f64 = 400.0;
/// Receive-chain losses of the UAM terminal not covered by the antenna figures.
const UAM_RX_MARGIN_DB: f64 = 11.33;
const TX_HELI_KU: f64 = 15.75;
const TX_HELI_KA: f64 = 2.79;
const T_HELI_KA: f64 = 61.7;
/// Chosen so the flight-average interference time is about 1.6 ms.
const UAV2_BLADE_WIDTH_M: f64 = 0.087;

fn loiter(lat: f64, lon: f64, radius_km: f64, altitude_m: f64, speed_m_s: f64) -> RouteConfig {
    RouteConfig::Loiter {
        loiter: Loiter {
            center_latitude_deg: lat,
            center_longitude_deg: lon,
            radius_km,
            altitude_m,
            speed_m_s,
            waypoint_interval_s: 5.0,
        },
    }
}

fn rain(points: &[(f64, f64)]) -> RainProfile {
    RainProfile(points.iter().map(|&(t, r)| RainPoint { time_s: t, rate_mm_h: r }).collect())
}

fn phy(band: Option<NtnBandName>, scs_khz: u32, bandwidth_mhz: f64, n_rb: u32, modulation: Modulation) -> PhyConfig {
    PhyConfig {
        band,
        scs_khz,
        bandwidth_mhz,
        n_rb,
        mcs: McsConfig { modulation, code_rate: 0.5, coding_gain_db: 6.0 },
        overhead_fraction: 0.0,
        overlap_rule: OverlapRule::Majority,
        blade_phase_ms: 0.0,
        random_blade_phase: false,
    }
}

#[allow(clippy::too_many_arguments)]
fn entry(
    id: &str,
    description: &str,
    aircraft: &str,
    constellation: &str,
    link_direction: LinkDirection,
    band: Band,
    carrier_ghz: f64,
    flight: RouteConfig,
    duration_h: f64,
    handover_threshold_deg: f64,
    rain_profile: RainProfile,
    phy: PhyConfig,
    reduced_bandwidth_mhz: Option<f64>,
) -> ScenarioEntry {
    ScenarioEntry {
        id: id.into(),
        description: Some(description.into()),
        aircraft: aircraft.into(),
        constellation: constellation.into(),
        link_direction,
        band,
        carrier_ghz,
        flight,
        duration_h,
        handover_threshold_deg,
        handover_hysteresis_deg: 0.5,
        rain_profile,
        phy,
        loss_model: LossModel::default(),
        reduced_bandwidth_mhz,
    }
}

impl ScenarioEntry {
    fn with_margin(mut self, margin_db: f64) -> Self {
        self.loss_model.margin_db = margin_db;
        self
    }
}

pub(super) fn scenarios() -> Vec<ScenarioEntry> {
    use LinkDirection::*;
    vec![
        entry(
            "scenario-6",
            "UAV-1 surveillance uplink, fixed Ka patch array to LEO-2; CNR' over 15 MHz",
            "UAV-1",
            "LEO-2",
            Uplink,
            Band::Ka,
            29.5,
            loiter(48.0, 11.0, 2.0, 120.0, 15.0),
            0.5,
            35.0,
            rain(&[]),
            phy(None, 30, 15.0, 38, Modulation::Qpsk),
            Some(15.0),
        ),
        entry(
            "scenario-7",
            "UAV-2 inspection uplink, S-band patch under the blades to LEO-1; CNR' over 5 MHz",
            "UAV-2",
            "LEO-1",
            Uplink,
            Band::S,
            1.995,
            loiter(55.0, 10.0, 3.0, 150.0, 20.0),
            2.0,
            40.0,
            rain(&[(0.0, 0.0), (3600.0, 12.0), (4800.0, 0.0)]),
            phy(Some(NtnBandName::N256), 30, 5.0, 11, Modulation::Qpsk),
            Some(5.0),
        ),
        entry(
            "scenario-11",
            "UAM passenger flight downlink, Ka phased array from MEO; CNR' over 100 MHz",
            "UAM",
            "MEO",
            Downlink,
            Band::Ka,
            19.0,
            loiter(-50.0, 10.0, 15.0, 500.0, 40.0),
            1.45,
            39.0,
            rain(&[]),
            phy(Some(NtnBandName::N510), 120, 100.0, 66, Modulation::Qam16),
            Some(100.0),
        )
        .with_margin(UAM_RX_MARGIN_DB),
        entry(
            "scenario-15a",
            "HELI emergency uplink, Ka phased array to LEO-1; CNR' over 200 MHz",
            "HELI",
            "LEO-1",
            Uplink,
            Band::Ka,
            28.5,
            loiter(52.0, 8.0, 10.0, 600.0, 60.0),
            2.0,
            39.0,
            rain(&[(0.0, 0.0), (2400.0, 15.0), (4200.0, 0.0)]),
            phy(Some(NtnBandName::N511), 120, 200.0, 132, Modulation::Qpsk),
            Some(200.0),
        ),
        entry(
            "scenario-15b",
            "HELI emergency uplink, steerable Ku parabolic dish to GEO (comparison link outside the NTN band plan)",
            "HELI",
            "GEO",
            Uplink,
            Band::Ku,
            14.25,
            loiter(59.3, 0.0, 10.0, 600.0, 60.0),
            2.0,
            10.0,
            rain(&[(0.0, 0.0), (2400.0, 10.0), (4200.0, 0.0)]),
            phy(None, 60, 36.0, 48, Modulation::Qam16),
            None,
        ),
        entry(
            "scenario-19",
            "HELI downlink, Ka phased array from LEO-2",
            "HELI",
            "LEO-2",
            Downlink,
            Band::Ka,
            19.5,
            loiter(48.0, 11.0, 10.0, 600.0, 60.0),
            2.5,
            34.5,
            rain(&[]),
            phy(Some(NtnBandName::N510), 120, 400.0, 264, Modulation::Qam16),
            None,
        ),
    ]
}

/// The shipped catalog in file form.
pub fn builtin_file() -> ScenarioFile {
    ScenarioFile { aircraft: aircraft(), constellations: constellations(), scenarios: scenarios() }
}

/// File form of one built-in scenario and only what it references.
pub fn builtin_file_for(id: &str) -> Option<ScenarioFile> {
    let all = builtin_file();
    let entry = all.scenarios.iter().find(|s| s.id == id)?.clone();
    Some(ScenarioFile {
        aircraft: all.aircraft.into_iter().filter(|a| a.name == entry.aircraft).collect(),
        constellations: all.constellations.into_iter().filter(|c| c.name == entry.constellation).collect(),
        scenarios: vec![entry],
    })
}

pub fn builtin_ids() -> Vec<String> {
    scenarios().into_iter().map(|s| s.id).collect()
}

/// The six shipped scenarios, resolved.
pub fn builtin_catalog() -> Vec<ScenarioSpec> {
    builtin_file().resolve().expect("built-in catalog is valid")
}

pub fn builtin(id: &str) -> Option<ScenarioSpec> {
    builtin_file_for(id).map(|f| f.resolve().expect("built-in catalog is valid").remove(0))
}
