//! Circular two-body orbit propagation, Earth-fixed frame conversion,
//! topocentric look angles, Doppler and the serving-satellite timeline.
//!
//! The Earth is a sphere of radius [`EARTH_RADIUS_KM`] rotating at
//! [`EARTH_ROTATION_RAD_S`]; no J2 or drag. The sidereal angle at epoch is 0.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::scenario::ScenarioSpec;

// ============================================================================
// Constants
// ============================================================================

/// Equatorial Earth radius (km).
pub const EARTH_RADIUS_KM: f64 = 6378.14;
/// Earth gravitational parameter (km³/s²).
pub const MU_EARTH_KM3_S2: f64 = 3.986004418e5;
/// Sidereal rotation rate (rad/s).
pub const EARTH_ROTATION_RAD_S: f64 = 7.2921159e-5;
/// Speed of light (km/s).
pub const SPEED_OF_LIGHT_KM_S: f64 = 299_792.458;

// ============================================================================
// Vector helpers
// ============================================================================

pub type Vec3 = [f64; 3];

#[inline]
pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

// ============================================================================
// Elements and states
// ============================================================================

/// Circular Keplerian element set for one satellite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeplerianElements {
    /// Semi-major axis (km).
    pub semi_major_axis_km: f64,
    /// Always 0 for this propagator.
    pub eccentricity: f64,
    pub inclination_deg: f64,
    pub raan_deg: f64,
    /// Argument of latitude at epoch (true anomaly for circular orbits), degrees.
    pub arg_latitude_deg: f64,
}

impl KeplerianElements {
    pub fn circular(altitude_km: f64, inclination_deg: f64, raan_deg: f64, arg_latitude_deg: f64) -> Self {
        Self {
            semi_major_axis_km: EARTH_RADIUS_KM + altitude_km,
            eccentricity: 0.0,
            inclination_deg,
            raan_deg,
            arg_latitude_deg,
        }
    }

    /// Mean motion (rad/s).
    pub fn mean_motion(&self) -> f64 {
        (MU_EARTH_KM3_S2 / self.semi_major_axis_km.powi(3)).sqrt()
    }

    /// Orbital period (s).
    pub fn period_s(&self) -> f64 {
        2.0 * PI / self.mean_motion()
    }

    /// Circular orbital speed (km/s).
    pub fn circular_speed(&self) -> f64 {
        (MU_EARTH_KM3_S2 / self.semi_major_axis_km).sqrt()
    }
}

/// Inertial position/velocity at a time since epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalState {
    pub time_s: f64,
    /// ECI position (km).
    pub position: Vec3,
    /// ECI velocity (km/s).
    pub velocity: Vec3,
}

/// Earth-fixed position/velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcefState {
    pub position: Vec3,
    pub velocity: Vec3,
}

/// Propagates a circular orbit to `time_s` seconds after epoch.
pub fn propagate(elements: &KeplerianElements, time_s: f64) -> OrbitalState {
    let a = elements.semi_major_axis_km;
    let n = elements.mean_motion();
    let u = elements.arg_latitude_deg.to_radians() + n * time_s;
    let (su, cu) = u.sin_cos();
    let (so, co) = elements.raan_deg.to_radians().sin_cos();
    let (si, ci) = elements.inclination_deg.to_radians().sin_cos();

    let position = [
        a * (co * cu - so * su * ci),
        a * (so * cu + co * su * ci),
        a * (su * si),
    ];
    let v = a * n;
    let velocity = [
        v * (-co * su - so * cu * ci),
        v * (-so * su + co * cu * ci),
        v * (cu * si),
    ];
    OrbitalState { time_s, position, velocity }
}

/// Rotates an inertial state into the Earth-fixed frame at `time_s`.
///
/// `theta0_rad` is the sidereal angle at epoch.
pub fn eci_to_ecef(state: &OrbitalState, time_s: f64, theta0_rad: f64) -> EcefState {
    let theta = EARTH_ROTATION_RAD_S * time_s + theta0_rad;
    let (s, c) = theta.sin_cos();
    let rot = |v: Vec3| [c * v[0] + s * v[1], -s * v[0] + c * v[1], v[2]];
    let r = rot(state.position);
    let v_rot = rot(state.velocity);
    // v_ecef = R v_eci - ω × r_ecef, with ω along +z
    let w = EARTH_ROTATION_RAD_S;
    let velocity = [v_rot[0] + w * r[1], v_rot[1] - w * r[0], v_rot[2]];
    EcefState { position: r, velocity }
}

// ============================================================================
// Observer and look angles
// ============================================================================

/// Point above the spherical Earth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodeticPosition {
    pub latitude_deg: f64,
    pub longitude_deg: f64,
    pub altitude_m: f64,
}

impl GeodeticPosition {
    pub fn new(latitude_deg: f64, longitude_deg: f64, altitude_m: f64) -> Self {
        Self { latitude_deg, longitude_deg, altitude_m }
    }

    pub fn to_ecef(&self) -> Vec3 {
        let r = EARTH_RADIUS_KM + self.altitude_m / 1000.0;
        let (sl, cl) = self.latitude_deg.to_radians().sin_cos();
        let (so, co) = self.longitude_deg.to_radians().sin_cos();
        [r * cl * co, r * cl * so, r * sl]
    }
}

/// Satellite as seen from an observer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopocentricView {
    pub elevation_deg: f64,
    /// Clockwise from north, [0, 360).
    pub azimuth_deg: f64,
    pub slant_range_km: f64,
    /// d(slant range)/dt, positive when receding (km/s).
    pub range_rate_km_s: f64,
}

/// Look angles from a (possibly moving) observer to an Earth-fixed satellite state.
///
/// `observer_velocity` is the observer's Earth-fixed velocity (km/s).
pub fn look_angles_moving(observer: &GeodeticPosition, observer_velocity: Vec3, sat: &EcefState) -> TopocentricView {
    let obs = observer.to_ecef();
    let rel = sub(sat.position, obs);
    let range = norm(rel);

    let (sl, cl) = observer.latitude_deg.to_radians().sin_cos();
    let (so, co) = observer.longitude_deg.to_radians().sin_cos();
    let east = [-so, co, 0.0];
    let north = [-sl * co, -sl * so, cl];
    let up = [cl * co, cl * so, sl];

    let e = dot(rel, east);
    let n = dot(rel, north);
    let u = dot(rel, up);
    let elevation_deg = (u / range).clamp(-1.0, 1.0).asin().to_degrees();
    let azimuth_deg = e.atan2(n).to_degrees().rem_euclid(360.0);
    let rel_v = sub(sat.velocity, observer_velocity);
    let range_rate_km_s = dot(rel, rel_v) / range;

    TopocentricView { elevation_deg, azimuth_deg, slant_range_km: range, range_rate_km_s }
}

/// Look angles from a stationary observer.
pub fn look_angles(observer: &GeodeticPosition, sat: &EcefState) -> TopocentricView {
    look_angles_moving(observer, [0.0; 3], sat)
}

/// Doppler shift (kHz) for a range rate (km/s) at a carrier (GHz); positive when approaching.
pub fn doppler_shift(range_rate_km_s: f64, carrier_ghz: f64) -> f64 {
    -(range_rate_km_s / SPEED_OF_LIGHT_KM_S) * carrier_ghz * 1e6
}

// ============================================================================
// Serving-satellite selection
// ============================================================================

/// Stateful handover rule.
///
/// The serving satellite is kept while its elevation stays at or above the
/// threshold. When it drops below, the link hands over to the highest visible
/// satellite at or above the threshold. From an outage, a satellite is only
/// acquired once it clears the threshold by the hysteresis margin.
#[derive(Debug, Clone)]
pub struct ServingSelector {
    threshold_deg: f64,
    hysteresis_deg: f64,
    current: Option<usize>,
}

impl ServingSelector {
    pub fn new(threshold_deg: f64, hysteresis_deg: f64) -> Self {
        Self { threshold_deg, hysteresis_deg, current: None }
    }

    pub fn current(&self) -> Option<usize> {
        self.current
    }

    /// Updates the serving satellite from all-satellite views at one instant.
    pub fn select(&mut self, views: &[TopocentricView]) -> Option<usize> {
        if let Some(id) = self.current {
            if views.get(id).is_some_and(|v| v.elevation_deg >= self.threshold_deg) {
                return self.current;
            }
            self.current = best_above(views, self.threshold_deg);
        } else {
            self.current = best_above(views, self.threshold_deg + self.hysteresis_deg);
        }
        self.current
    }
}

fn best_above(views: &[TopocentricView], min_elevation_deg: f64) -> Option<usize> {
    views
        .iter()
        .enumerate()
        .filter(|(_, v)| v.elevation_deg >= min_elevation_deg)
        .max_by(|a, b| a.1.elevation_deg.total_cmp(&b.1.elevation_deg))
        .map(|(i, _)| i)
}

/// One-shot serving selection given the currently serving satellite.
pub fn select_serving(views: &[TopocentricView], current: Option<usize>, threshold_deg: f64) -> Option<usize> {
    let mut selector = ServingSelector { threshold_deg, hysteresis_deg: 0.0, current };
    selector.select(views)
}

// ============================================================================
// Access timeline
// ============================================================================

/// Serving-satellite geometry at one timeline step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessSample {
    pub time_s: f64,
    pub satellite_id: Option<usize>,
    pub view: Option<TopocentricView>,
    /// Doppler at the scenario carrier (kHz).
    pub doppler_khz: Option<f64>,
}

impl AccessSample {
    pub fn is_served(&self) -> bool {
        self.satellite_id.is_some()
    }
}

/// Serving-satellite timeline for a scenario.
#[derive(Debug, Clone)]
pub struct AccessTimeline {
    pub samples: Vec<AccessSample>,
    /// Indices of samples at which the serving satellite changed to another satellite.
    pub handovers: Vec<usize>,
}

impl AccessTimeline {
    /// Percentage of samples with a serving satellite.
    pub fn access_percentage(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        let served = self.samples.iter().filter(|s| s.is_served()).count();
        100.0 * served as f64 / self.samples.len() as f64
    }
}

/// Views of every satellite from the aircraft position at `time_s`.
pub fn all_views(elements: &[KeplerianElements], scenario: &ScenarioSpec, time_s: f64) -> Vec<TopocentricView> {
    let observer = scenario.flight.position_at(time_s);
    let observer_velocity = scenario.flight.ecef_velocity_at(time_s);
    elements
        .iter()
        .map(|el| {
            let sat = eci_to_ecef(&propagate(el, time_s), time_s, 0.0);
            look_angles_moving(&observer, observer_velocity, &sat)
        })
        .collect()
}

/// Builds the serving-satellite timeline at `step_s` spacing over the flight duration.
pub fn build_access_timeline(scenario: &ScenarioSpec, step_s: f64) -> AccessTimeline {
    assert!(step_s > 0.0, "timeline step must be positive");
    let elements = scenario.constellation.expand();
    let duration_s = scenario.duration_h * 3600.0;
    let n_steps = if duration_s > 0.0 { (duration_s / step_s).ceil() as usize } else { 0 };

    let views: Vec<Vec<TopocentricView>> = (0..n_steps)
        .into_par_iter()
        .map(|k| all_views(&elements, scenario, k as f64 * step_s))
        .collect();

    let mut selector = ServingSelector::new(scenario.handover_threshold_deg, scenario.handover_hysteresis_deg);
    let mut samples = Vec::with_capacity(n_steps);
    let mut handovers = Vec::new();
    let mut previous = None;
    for (k, step_views) in views.iter().enumerate() {
        let time_s = k as f64 * step_s;
        let serving = selector.select(step_views);
        if let (Some(prev), Some(now)) = (previous, serving) {
            if prev != now {
                handovers.push(k);
            }
        }
        previous = serving.or(previous);
        let view = serving.map(|id| step_views[id]);
        samples.push(AccessSample {
            time_s,
            satellite_id: serving,
            view,
            doppler_khz: view.map(|v| doppler_shift(v.range_rate_km_s, scenario.carrier_ghz)),
        });
    }
    AccessTimeline { samples, handovers }
}

/// Writes the access timeline as CSV.
pub fn write_access_csv<W: std::io::Write>(timeline: &AccessTimeline, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "time_s",
        "sat_id",
        "elevation_deg",
        "azimuth_deg",
        "slant_range_km",
        "range_rate_kms",
        "doppler_khz",
    ])?;
    for s in &timeline.samples {
        match (s.satellite_id, s.view, s.doppler_khz) {
            (Some(id), Some(v), Some(d)) => w.write_record([
                s.time_s.to_string(),
                id.to_string(),
                v.elevation_deg.to_string(),
                v.azimuth_deg.to_string(),
                v.slant_range_km.to_string(),
                v.range_rate_km_s.to_string(),
                d.to_string(),
            ])?,
            _ => w.write_record([s.time_s.to_string(), String::new(), String::new(), String::new(), String::new(), String::new(), String::new()])?,
        }
    }
    w.flush()?;
    Ok(())
}
