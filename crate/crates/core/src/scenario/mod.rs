//! Constellations, aircraft, flights and scenarios: the data model, its
//! validation, and JSON loading.
//!
//! A scenario file has three top-level arrays: `aircraft`, `constellations`
//! and `scenarios`. Scenarios reference aircraft and constellations by name;
//! loading resolves the references and checks every invariant, so a
//! [`ScenarioSpec`] in hand is always self-consistent.

mod builtin;

pub use builtin::{builtin, builtin_catalog, builtin_file, builtin_file_for, builtin_ids};

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blades::RotorSpec;
use crate::link::LossModel;
use crate::orbit::{GeodeticPosition, KeplerianElements, Vec3, EARTH_RADIUS_KM};
use crate::phy::{self, Channel, McsConfig, NtnBand, NtnBandName, OverlapRule, PhyError};

pub use crate::phy::Direction as LinkDirection;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed scenario file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },
    #[error("unresolved reference: {0}")]
    UnresolvedReference(String),
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation { field: field.into(), reason: reason.into() }
}

// ============================================================================
// Bands
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Band {
    S,
    Ku,
    Ka,
}

impl Band {
    /// Band of a carrier: S below 4 GHz, Ku up to 17.3 GHz, Ka above.
    pub fn from_frequency(frequency_ghz: f64) -> Band {
        if frequency_ghz < 4.0 {
            Band::S
        } else if frequency_ghz < 17.3 {
            Band::Ku
        } else {
            Band::Ka
        }
    }
}

// ============================================================================
// Constellations
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Configuration {
    Single,
    Star,
    Delta,
}

/// Plane RAANs, listed or generated as `start + (N−1)·step` for plane N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RaanRule {
    List(Vec<f64>),
    Spacing { start_deg: f64, step_deg: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayloadAntennaType {
    ParabolicReflector,
    DirectRadiatingArray,
    Patch,
}

/// Satellite RF payload for one band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfPayloadSpec {
    pub band: Band,
    pub beam_eirp_dbw: f64,
    pub hpbw_deg: f64,
    pub gt_dbk: f64,
    pub beams: u32,
    pub antenna_type: PayloadAntennaType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_temperature_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstellationSpec {
    pub name: String,
    /// Altitude above the mean surface (km).
    pub altitude_km: f64,
    pub planes: u32,
    /// One entry per plane, or a single entry for all planes.
    pub inclinations_deg: Vec<f64>,
    pub raans: RaanRule,
    pub sats_per_plane: u32,
    pub configuration: Configuration,
    /// Walker phasing factor F: plane p is shifted by p·F·360/T degrees.
    #[serde(default)]
    pub phasing_factor: u32,
    /// Argument of latitude of the first satellite of the first plane at epoch.
    #[serde(default)]
    pub initial_arg_latitude_deg: f64,
    pub payloads: Vec<RfPayloadSpec>,
}

impl ConstellationSpec {
    pub fn total_satellites(&self) -> u32 {
        self.planes * self.sats_per_plane
    }

    pub fn inclination_of(&self, plane: u32) -> f64 {
        if self.inclinations_deg.len() == 1 {
            self.inclinations_deg[0]
        } else {
            self.inclinations_deg[plane as usize]
        }
    }

    pub fn raan_of(&self, plane: u32) -> f64 {
        match &self.raans {
            RaanRule::List(v) => v[plane as usize],
            RaanRule::Spacing { start_deg, step_deg } => start_deg + plane as f64 * step_deg,
        }
    }

    pub fn payload(&self, band: Band) -> Option<&RfPayloadSpec> {
        self.payloads.iter().find(|p| p.band == band)
    }

    /// Per-satellite circular elements, plane-major.
    pub fn expand(&self) -> Vec<KeplerianElements> {
        expand_constellation(self)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let f = |name: &str| format!("constellations[{}].{name}", self.name);
        if !(self.altitude_km > 0.0) {
            return Err(invalid(f("altitude_km"), "must be > 0"));
        }
        if self.planes < 1 {
            return Err(invalid(f("planes"), "must be >= 1"));
        }
        if self.sats_per_plane < 1 {
            return Err(invalid(f("sats_per_plane"), "must be >= 1"));
        }
        let n = self.inclinations_deg.len();
        if n != 1 && n != self.planes as usize {
            return Err(invalid(f("inclinations_deg"), format!("expected 1 or {} entries, got {n}", self.planes)));
        }
        if let RaanRule::List(v) = &self.raans {
            if v.len() != self.planes as usize {
                return Err(invalid(f("raans"), format!("expected {} entries, got {}", self.planes, v.len())));
            }
        }
        for p in &self.payloads {
            if !p.beam_eirp_dbw.is_finite() {
                return Err(invalid(f("payloads.beam_eirp_dbw"), "must be finite"));
            }
            if !(p.hpbw_deg > 0.0) {
                return Err(invalid(f("payloads.hpbw_deg"), "must be > 0"));
            }
            if p.beams < 1 {
                return Err(invalid(f("payloads.beams"), "must be >= 1"));
            }
            if !p.gt_dbk.is_finite() {
                return Err(invalid(f("payloads.gt_dbk"), "must be finite"));
            }
        }
        Ok(())
    }
}

/// One circular element set per satellite, evenly phased within each plane.
pub fn expand_constellation(spec: &ConstellationSpec) -> Vec<KeplerianElements> {
    let total = spec.total_satellites() as f64;
    let spacing = 360.0 / spec.sats_per_plane as f64;
    let mut out = Vec::with_capacity(spec.total_satellites() as usize);
    for plane in 0..spec.planes {
        let inclination = spec.inclination_of(plane);
        let raan = spec.raan_of(plane).rem_euclid(360.0);
        let plane_shift = plane as f64 * spec.phasing_factor as f64 * 360.0 / total;
        for sat in 0..spec.sats_per_plane {
            let u = spec.initial_arg_latitude_deg + plane_shift + sat as f64 * spacing;
            out.push(KeplerianElements::circular(spec.altitude_km, inclination, raan, u));
        }
    }
    out
}

// ============================================================================
// Aircraft
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntennaType {
    PatchArrayFixed,
    PatchFixed,
    PhasedArraySteerable,
    ParabolicSteerable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntennaPosition {
    MainBody,
    UnderBlades,
}

/// Half-power beamwidth, fixed or a scan-dependent range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Beamwidth {
    Single(f64),
    Range([f64; 2]),
}

impl Beamwidth {
    /// Narrowest beamwidth.
    pub fn min(&self) -> f64 {
        match self {
            Beamwidth::Single(v) => *v,
            Beamwidth::Range([a, b]) => a.min(*b),
        }
    }
}

fn default_noise_temperature() -> f64 {
    400.0
}

fn default_boresight_elevation() -> f64 {
    90.0
}

/// One aircraft antenna and its RF front end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AircraftAntenna {
    pub band: Band,
    pub antenna_type: AntennaType,
    pub bandwidth_mhz: f64,
    pub beamwidth_deg: Beamwidth,
    pub max_gain_dbi: f64,
    /// Transmitter power into the antenna (dBW).
    pub tx_power_dbw: f64,
    /// Receiver system noise temperature (K).
    #[serde(default = "default_noise_temperature")]
    pub noise_temperature_k: f64,
    /// Fixed antennas: boresight elevation in level flight.
    #[serde(default = "default_boresight_elevation")]
    pub boresight_elevation_deg: f64,
    #[serde(default)]
    pub boresight_azimuth_deg: f64,
    /// Steerable antennas: lowest elevation they can track.
    #[serde(default)]
    pub steering_min_elevation_deg: f64,
}

impl AircraftAntenna {
    pub fn hpbw_deg(&self) -> f64 {
        self.beamwidth_deg.min()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AircraftSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub antennas: Vec<AircraftAntenna>,
    pub antenna_position: AntennaPosition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotor: Option<RotorSpec>,
}

impl AircraftSpec {
    pub fn antenna(&self, band: Band) -> Option<&AircraftAntenna> {
        self.antennas.iter().find(|a| a.band == band)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let f = |name: &str| format!("aircraft[{}].{name}", self.name);
        if self.antennas.is_empty() {
            return Err(invalid(f("antennas"), "at least one antenna required"));
        }
        for a in &self.antennas {
            if !a.max_gain_dbi.is_finite() {
                return Err(invalid(f("antennas.max_gain_dbi"), "must be finite"));
            }
            if !(a.bandwidth_mhz > 0.0) {
                return Err(invalid(f("antennas.bandwidth_mhz"), "must be > 0"));
            }
            if !(a.beamwidth_deg.min() > 0.0) {
                return Err(invalid(f("antennas.beamwidth_deg"), "must be > 0"));
            }
            if !a.tx_power_dbw.is_finite() {
                return Err(invalid(f("antennas.tx_power_dbw"), "must be finite"));
            }
            if !(a.noise_temperature_k > 0.0) {
                return Err(invalid(f("antennas.noise_temperature_k"), "must be > 0"));
            }
        }
        match (self.antenna_position, &self.rotor) {
            (AntennaPosition::UnderBlades, None) => {
                return Err(invalid(f("rotor"), "required when the antenna is under the blades"))
            }
            (AntennaPosition::MainBody, Some(_)) => {
                return Err(invalid(f("rotor"), "only allowed when the antenna is under the blades"))
            }
            (_, Some(r)) => r.validate().map_err(|e| invalid(f("rotor"), e))?,
            _ => {}
        }
        Ok(())
    }
}

// ============================================================================
// Flight routes and weather
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub time_s: f64,
    pub latitude_deg: f64,
    pub longitude_deg: f64,
    pub altitude_m: f64,
}

/// Piecewise-linear route; the aircraft holds the last waypoint afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlightRoute {
    pub waypoints: Vec<Waypoint>,
}

impl FlightRoute {
    pub fn validate(&self) -> Result<(), String> {
        if self.waypoints.is_empty() {
            return Err("at least one waypoint required".into());
        }
        if self.waypoints.windows(2).any(|w| !(w[1].time_s > w[0].time_s)) {
            return Err("waypoint times must be strictly increasing".into());
        }
        for w in &self.waypoints {
            if !(-90.0..=90.0).contains(&w.latitude_deg) {
                return Err(format!("latitude {} outside [-90, 90]", w.latitude_deg));
            }
            if !(-180.0..=180.0).contains(&w.longitude_deg) {
                return Err(format!("longitude {} outside [-180, 180]", w.longitude_deg));
            }
            if !(w.altitude_m >= 0.0) {
                return Err(format!("altitude {} below 0", w.altitude_m));
            }
        }
        Ok(())
    }

    pub fn position_at(&self, time_s: f64) -> GeodeticPosition {
        let wp = &self.waypoints;
        let i = wp.partition_point(|w| w.time_s <= time_s);
        let at = |w: &Waypoint| GeodeticPosition::new(w.latitude_deg, w.longitude_deg, w.altitude_m);
        if i == 0 {
            return at(&wp[0]);
        }
        if i == wp.len() {
            return at(&wp[i - 1]);
        }
        let (a, b) = (&wp[i - 1], &wp[i]);
        let f = (time_s - a.time_s) / (b.time_s - a.time_s);
        let dlon = (b.longitude_deg - a.longitude_deg + 540.0).rem_euclid(360.0) - 180.0;
        let lon = a.longitude_deg + f * dlon;
        GeodeticPosition::new(
            a.latitude_deg + f * (b.latitude_deg - a.latitude_deg),
            (lon + 540.0).rem_euclid(360.0) - 180.0,
            a.altitude_m + f * (b.altitude_m - a.altitude_m),
        )
    }

    /// Earth-fixed velocity (km/s) by central difference over ±0.5 s.
    pub fn ecef_velocity_at(&self, time_s: f64) -> Vec3 {
        if self.waypoints.len() < 2 {
            return [0.0; 3];
        }
        let a = self.position_at(time_s - 0.5).to_ecef();
        let b = self.position_at(time_s + 0.5).to_ecef();
        [b[0] - a[0], b[1] - a[1], b[2] - a[2]]
    }
}

/// Circular holding pattern expanded into waypoints at load time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Loiter {
    pub center_latitude_deg: f64,
    pub center_longitude_deg: f64,
    pub radius_km: f64,
    pub altitude_m: f64,
    pub speed_m_s: f64,
    #[serde(default = "default_waypoint_interval")]
    pub waypoint_interval_s: f64,
}

fn default_waypoint_interval() -> f64 {
    5.0
}

impl Loiter {
    pub fn to_route(&self, duration_s: f64) -> FlightRoute {
        let n = (duration_s / self.waypoint_interval_s).ceil().max(1.0) as usize;
        let angular_rate = if self.radius_km > 0.0 { self.speed_m_s / 1000.0 / self.radius_km } else { 0.0 };
        let arc = self.radius_km / EARTH_RADIUS_KM;
        let cos_lat = self.center_latitude_deg.to_radians().cos().max(1e-6);
        let waypoints = (0..=n)
            .map(|k| {
                let t = k as f64 * self.waypoint_interval_s;
                let theta = angular_rate * t;
                let lon = self.center_longitude_deg + (arc * theta.sin() / cos_lat).to_degrees();
                Waypoint {
                    time_s: t,
                    latitude_deg: (self.center_latitude_deg + (arc * theta.cos()).to_degrees()).clamp(-90.0, 90.0),
                    longitude_deg: (lon + 540.0).rem_euclid(360.0) - 180.0,
                    altitude_m: self.altitude_m,
                }
            })
            .collect();
        FlightRoute { waypoints }
    }
}

/// Flight description in a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RouteConfig {
    Waypoints { waypoints: Vec<Waypoint> },
    Loiter { loiter: Loiter },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RainPoint {
    pub time_s: f64,
    pub rate_mm_h: f64,
}

/// Piecewise-constant rain rate; zero before the first tag.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RainProfile(pub Vec<RainPoint>);

impl RainProfile {
    pub fn rate_at(&self, time_s: f64) -> f64 {
        let i = self.0.partition_point(|p| p.time_s <= time_s);
        if i == 0 {
            0.0
        } else {
            self.0[i - 1].rate_mm_h
        }
    }

    /// Profile with every rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> RainProfile {
        RainProfile(self.0.iter().map(|p| RainPoint { time_s: p.time_s, rate_mm_h: p.rate_mm_h * factor }).collect())
    }
}

// ============================================================================
// PHY configuration
// ============================================================================

/// 5G-NTN waveform configuration for a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhyConfig {
    /// NTN operating band; absent for carriers outside the NTN band plan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<NtnBandName>,
    pub scs_khz: u32,
    pub bandwidth_mhz: f64,
    pub n_rb: u32,
    pub mcs: McsConfig,
    #[serde(default)]
    pub overhead_fraction: f64,
    #[serde(default)]
    pub overlap_rule: OverlapRule,
    /// Time of the first blade crossing after each frame window starts (ms).
    #[serde(default)]
    pub blade_phase_ms: f64,
    /// Draw the blade phase per window from the run seed instead.
    #[serde(default)]
    pub random_blade_phase: bool,
}

// ============================================================================
// Scenarios
// ============================================================================

fn default_hysteresis() -> f64 {
    0.5
}

/// Scenario as written in a file, with aircraft/constellation by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub aircraft: String,
    pub constellation: String,
    pub link_direction: LinkDirection,
    pub band: Band,
    pub carrier_ghz: f64,
    pub flight: RouteConfig,
    pub duration_h: f64,
    pub handover_threshold_deg: f64,
    #[serde(default = "default_hysteresis")]
    pub handover_hysteresis_deg: f64,
    #[serde(default)]
    pub rain_profile: RainProfile,
    pub phy: PhyConfig,
    #[serde(default)]
    pub loss_model: LossModel,
    /// Narrower channel for the reduced-bandwidth CNR.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_bandwidth_mhz: Option<f64>,
}

/// Top-level scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub aircraft: Vec<AircraftSpec>,
    pub constellations: Vec<ConstellationSpec>,
    pub scenarios: Vec<ScenarioEntry>,
}

/// Fully resolved and validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub id: String,
    pub description: Option<String>,
    pub aircraft: AircraftSpec,
    pub constellation: ConstellationSpec,
    pub link_direction: LinkDirection,
    pub band: Band,
    pub carrier_ghz: f64,
    pub flight: FlightRoute,
    pub duration_h: f64,
    pub handover_threshold_deg: f64,
    pub handover_hysteresis_deg: f64,
    pub rain_profile: RainProfile,
    pub phy: PhyConfig,
    pub loss_model: LossModel,
    pub reduced_bandwidth_mhz: Option<f64>,
}

impl ScenarioSpec {
    pub fn antenna(&self) -> Option<&AircraftAntenna> {
        self.aircraft.antenna(self.band)
    }

    pub fn payload(&self) -> Option<&RfPayloadSpec> {
        self.constellation.payload(self.band)
    }

    pub fn duration_s(&self) -> f64 {
        self.duration_h * 3600.0
    }

    /// The PHY channel for this scenario's carrier and direction.
    pub fn channel(&self) -> Result<Channel, PhyError> {
        let p = &self.phy;
        match p.band {
            Some(b) => phy::validate_channel(&NtnBand::get(b), self.link_direction, self.carrier_ghz, p.bandwidth_mhz, p.scs_khz),
            None => phy::custom_channel(self.link_direction, self.carrier_ghz, p.bandwidth_mhz, p.scs_khz),
        }
    }

    /// File form holding only this scenario and what it references.
    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            aircraft: vec![self.aircraft.clone()],
            constellations: vec![self.constellation.clone()],
            scenarios: vec![ScenarioEntry {
                id: self.id.clone(),
                description: self.description.clone(),
                aircraft: self.aircraft.name.clone(),
                constellation: self.constellation.name.clone(),
                link_direction: self.link_direction,
                band: self.band,
                carrier_ghz: self.carrier_ghz,
                flight: RouteConfig::Waypoints { waypoints: self.flight.waypoints.clone() },
                duration_h: self.duration_h,
                handover_threshold_deg: self.handover_threshold_deg,
                handover_hysteresis_deg: self.handover_hysteresis_deg,
                rain_profile: self.rain_profile.clone(),
                phy: self.phy.clone(),
                loss_model: self.loss_model.clone(),
                reduced_bandwidth_mhz: self.reduced_bandwidth_mhz,
            }],
        }
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let f = |name: &str| format!("scenarios[{}].{name}", self.id);
        if !(self.duration_h > 0.0) {
            return Err(invalid(f("duration_h"), format!("must be > 0, got {}", self.duration_h)));
        }
        if !(0.0..90.0).contains(&self.handover_threshold_deg) {
            return Err(invalid(f("handover_threshold_deg"), "must be in [0, 90)"));
        }
        if !(self.handover_hysteresis_deg >= 0.0) {
            return Err(invalid(f("handover_hysteresis_deg"), "must be >= 0"));
        }
        if !(self.carrier_ghz > 0.0) {
            return Err(invalid(f("carrier_ghz"), "must be > 0"));
        }
        if Band::from_frequency(self.carrier_ghz) != self.band {
            return Err(invalid(f("carrier_ghz"), format!("{} GHz is not in the {:?} band", self.carrier_ghz, self.band)));
        }
        self.flight.validate().map_err(|e| invalid(f("flight"), e))?;
        if self.rain_profile.0.iter().any(|p| !(p.rate_mm_h >= 0.0))
            || self.rain_profile.0.windows(2).any(|w| w[1].time_s < w[0].time_s)
        {
            return Err(invalid(f("rain_profile"), "rates must be >= 0 with non-decreasing times"));
        }
        self.loss_model.validate().map_err(|e| invalid(f("loss_model"), e))?;

        let antenna = self.antenna().ok_or_else(|| {
            ScenarioError::UnresolvedReference(format!(
                "aircraft {} has no {:?}-band antenna for scenario {}",
                self.aircraft.name, self.band, self.id
            ))
        })?;
        if self.payload().is_none() {
            return Err(ScenarioError::UnresolvedReference(format!(
                "constellation {} has no {:?}-band payload for scenario {}",
                self.constellation.name, self.band, self.id
            )));
        }
        if let Some(reduced) = self.reduced_bandwidth_mhz {
            if !(reduced > 0.0 && reduced <= antenna.bandwidth_mhz) {
                return Err(invalid(f("reduced_bandwidth_mhz"), format!("must be in (0, {}]", antenna.bandwidth_mhz)));
            }
        }
        if self.phy.bandwidth_mhz > antenna.bandwidth_mhz {
            return Err(invalid(f("phy.bandwidth_mhz"), "exceeds the antenna bandwidth"));
        }
        let channel = self.channel().map_err(|e| invalid(f("phy"), e.to_string()))?;
        self.phy.mcs.validate().map_err(|e| invalid(f("phy.mcs"), e.to_string()))?;
        phy::transport_block_size(self.phy.n_rb, &channel.numerology, &self.phy.mcs, self.phy.overhead_fraction)
            .map_err(|e| invalid(f("phy.n_rb"), e.to_string()))?;
        Ok(())
    }
}

impl ScenarioFile {
    /// Resolves and validates every scenario in the file.
    pub fn resolve(&self) -> Result<Vec<ScenarioSpec>, ScenarioError> {
        for a in &self.aircraft {
            a.validate()?;
        }
        for c in &self.constellations {
            c.validate()?;
        }
        self.scenarios.iter().map(|e| self.resolve_entry(e)).collect()
    }

    fn resolve_entry(&self, e: &ScenarioEntry) -> Result<ScenarioSpec, ScenarioError> {
        let aircraft = self
            .aircraft
            .iter()
            .find(|a| a.name == e.aircraft)
            .ok_or_else(|| ScenarioError::UnresolvedReference(format!("unknown aircraft {:?}", e.aircraft)))?;
        let constellation = self
            .constellations
            .iter()
            .find(|c| c.name == e.constellation)
            .ok_or_else(|| ScenarioError::UnresolvedReference(format!("unknown constellation {:?}", e.constellation)))?;
        let flight = match &e.flight {
            RouteConfig::Waypoints { waypoints } => FlightRoute { waypoints: waypoints.clone() },
            RouteConfig::Loiter { loiter } => {
                if !(loiter.radius_km >= 0.0 && loiter.speed_m_s >= 0.0 && loiter.waypoint_interval_s > 0.0) {
                    return Err(invalid(format!("scenarios[{}].flight.loiter", e.id), "radius, speed and interval must be positive"));
                }
                loiter.to_route(e.duration_h.max(0.0) * 3600.0)
            }
        };
        let spec = ScenarioSpec {
            id: e.id.clone(),
            description: e.description.clone(),
            aircraft: aircraft.clone(),
            constellation: constellation.clone(),
            link_direction: e.link_direction,
            band: e.band,
            carrier_ghz: e.carrier_ghz,
            flight,
            duration_h: e.duration_h,
            handover_threshold_deg: e.handover_threshold_deg,
            handover_hysteresis_deg: e.handover_hysteresis_deg,
            rain_profile: e.rain_profile.clone(),
            phy: e.phy.clone(),
            loss_model: e.loss_model.clone(),
            reduced_bandwidth_mhz: e.reduced_bandwidth_mhz,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses and resolves every scenario in a JSON document.
pub fn parse_catalog(text: &str) -> Result<Vec<ScenarioSpec>, ScenarioError> {
    let file: ScenarioFile = serde_json::from_str(text)?;
    file.resolve()
}

fn read(path: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })
}

/// Loads every scenario in a file.
pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<ScenarioSpec>, ScenarioError> {
    parse_catalog(&read(path.as_ref())?)
}

/// Loads a file holding exactly one scenario.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioSpec, ScenarioError> {
    let mut all = load_catalog(path)?;
    if all.len() != 1 {
        return Err(invalid("scenarios", format!("expected exactly one scenario, found {}", all.len())));
    }
    Ok(all.remove(0))
}

/// Loads one scenario by id from a multi-scenario file.
pub fn load_scenario_id(path: impl AsRef<Path>, id: &str) -> Result<ScenarioSpec, ScenarioError> {
    load_catalog(path)?
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| ScenarioError::UnresolvedReference(format!("unknown scenario {id:?}")))
}

/// Pretty JSON for a single resolved scenario.
pub fn serialize_scenario(spec: &ScenarioSpec) -> String {
    serde_json::to_string_pretty(&spec.to_file()).expect("scenario types always serialize")
}
