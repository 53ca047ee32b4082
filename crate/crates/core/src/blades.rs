//! Rotor-blade blockage of an antenna mounted under the rotor.
//!
//! The boresight ray toward the serving satellite crosses the rotor plane at
//! the *interference point*, a distance `d_rotor` from the shaft. A blade of
//! chord `W` sweeps the arc `φ = 360·W / (2π·d_rotor)` while it covers that
//! point, which at `R_dms = 0.006·R_rpm` deg/ms lasts `t_int = φ / R_dms`.
//! One revolution takes `T_rot = 360 / R_dms`; with `N` blades the link is
//! open for `T_lnk = T_rot − N·t_int`, split into `N` gaps of `t_lnk = T_lnk / N`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::orbit::AccessSample;

#[derive(Debug, Error, PartialEq)]
pub enum BladeError {
    #[error("elevation must be in (0, 90] degrees, got {0}")]
    Elevation(f64),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("blades occlude continuously: {n_blades} x {t_int_ms} ms exceeds the {rotation_ms} ms rotation")]
    Overlap { n_blades: u32, t_int_ms: f64, rotation_ms: f64 },
    #[error("rotor needs at least one blade")]
    NoBlades,
}

/// Rotor and antenna mounting geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotorSpec {
    pub n_blades: u32,
    /// Blade chord (m).
    pub blade_width_m: f64,
    pub rotor_rpm: f64,
    /// Horizontal distance antenna → shaft (m).
    pub shaft_offset_m: f64,
    /// Vertical distance antenna → rotor plane (m).
    pub rotor_height_m: f64,
    /// Blade tip radius (m); crossings beyond it miss the blades.
    pub tip_radius_m: f64,
    /// Bearing of the shaft as seen from the antenna, clockwise from north.
    /// When absent the beam is taken to lie in the vertical plane through the shaft.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shaft_bearing_deg: Option<f64>,
}

impl RotorSpec {
    /// Blade rotational speed (deg/ms).
    pub fn rate_deg_per_ms(&self) -> f64 {
        0.006 * self.rotor_rpm
    }

    /// Time for one revolution (ms).
    pub fn rotation_time_ms(&self) -> f64 {
        360.0 / self.rate_deg_per_ms()
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n_blades < 2 {
            return Err(format!("n_blades must be >= 2, got {}", self.n_blades));
        }
        for (name, v) in [
            ("blade_width_m", self.blade_width_m),
            ("rotor_rpm", self.rotor_rpm),
            ("rotor_height_m", self.rotor_height_m),
            ("tip_radius_m", self.tip_radius_m),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.shaft_offset_m >= 0.0) {
            return Err(format!("shaft_offset_m must be >= 0, got {}", self.shaft_offset_m));
        }
        Ok(())
    }
}

/// Interference point geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BladeGeometry {
    /// Interference point → shaft distance (m).
    pub d_rotor_m: f64,
    /// Arc swept while a blade covers the point (deg).
    pub phi_deg: f64,
}

/// Periodic blockage timing for one geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BladeSchedule {
    pub n_blades: u32,
    /// Per-blade interference time (ms).
    pub t_int_ms: f64,
    /// Continuous link time between blades (ms).
    pub t_lnk_ms: f64,
    /// Revolution time (ms).
    pub rotation_time_ms: f64,
    /// Total unblocked time per revolution (ms).
    pub total_link_time_ms: f64,
    pub rate_deg_per_ms: f64,
}

impl BladeSchedule {
    /// Blockage period t_int + t_lnk (ms).
    pub fn period_ms(&self) -> f64 {
        self.t_int_ms + self.t_lnk_ms
    }

    /// Fraction of a revolution during which the link is blocked.
    pub fn duty_cycle(&self) -> f64 {
        self.n_blades as f64 * self.t_int_ms / self.rotation_time_ms
    }
}

/// Distance from the shaft to where the beam crosses the rotor plane, in the
/// vertical plane through the shaft. `None` when the crossing is beyond the tip.
pub fn interference_point(rotor: &RotorSpec, elevation_deg: f64) -> Result<Option<f64>, BladeError> {
    interference_point_at_azimuth(rotor, elevation_deg, 0.0)
}

/// As [`interference_point`] with the beam azimuth `relative_azimuth_deg`
/// away from the shaft direction.
pub fn interference_point_at_azimuth(
    rotor: &RotorSpec,
    elevation_deg: f64,
    relative_azimuth_deg: f64,
) -> Result<Option<f64>, BladeError> {
    if !(elevation_deg > 0.0 && elevation_deg <= 90.0) {
        return Err(BladeError::Elevation(elevation_deg));
    }
    let reach = if elevation_deg == 90.0 { 0.0 } else { rotor.rotor_height_m / elevation_deg.to_radians().tan() };
    let s = rotor.shaft_offset_m;
    let d = if relative_azimuth_deg == 0.0 {
        (s - reach).abs()
    } else {
        (s * s + reach * reach - 2.0 * s * reach * relative_azimuth_deg.to_radians().cos()).max(0.0).sqrt()
    };
    Ok((d <= rotor.tip_radius_m).then_some(d))
}

/// Arc (deg) covered by a blade of chord `blade_width_m` at radius `d_rotor_m`, capped at 360.
pub fn blade_angle(blade_width_m: f64, d_rotor_m: f64) -> Result<f64, BladeError> {
    if !(blade_width_m > 0.0) {
        return Err(BladeError::NonPositive { name: "blade_width_m", value: blade_width_m });
    }
    if !(d_rotor_m > 0.0) {
        return Err(BladeError::NonPositive { name: "d_rotor_m", value: d_rotor_m });
    }
    Ok((360.0 * blade_width_m / (2.0 * PI * d_rotor_m)).min(360.0))
}

pub fn geometry(rotor: &RotorSpec, d_rotor_m: f64) -> Result<BladeGeometry, BladeError> {
    Ok(BladeGeometry { d_rotor_m, phi_deg: blade_angle(rotor.blade_width_m, d_rotor_m)? })
}

/// Interference and link times for a rotor at a given geometry.
pub fn schedule(rotor: &RotorSpec, geometry: &BladeGeometry) -> Result<BladeSchedule, BladeError> {
    if rotor.n_blades == 0 {
        return Err(BladeError::NoBlades);
    }
    if !(rotor.rotor_rpm > 0.0) {
        return Err(BladeError::NonPositive { name: "rotor_rpm", value: rotor.rotor_rpm });
    }
    let rate = rotor.rate_deg_per_ms();
    let t_int = geometry.phi_deg / rate;
    let t_rot = 360.0 / rate;
    let n = rotor.n_blades as f64;
    let total_link = t_rot - n * t_int;
    if total_link < 0.0 {
        return Err(BladeError::Overlap { n_blades: rotor.n_blades, t_int_ms: t_int, rotation_ms: t_rot });
    }
    Ok(BladeSchedule {
        n_blades: rotor.n_blades,
        t_int_ms: t_int,
        t_lnk_ms: total_link / n,
        rotation_time_ms: t_rot,
        total_link_time_ms: total_link,
        rate_deg_per_ms: rate,
    })
}

/// Blade state of the link at a given satellite direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BladeState {
    /// Beam misses the rotor disc.
    Clear,
    Periodic(BladeSchedule, BladeGeometry),
    /// Blades cover the beam continuously.
    Blocked,
}

impl BladeState {
    pub fn t_int_ms(&self) -> f64 {
        match self {
            BladeState::Clear => 0.0,
            BladeState::Periodic(s, _) => s.t_int_ms,
            BladeState::Blocked => f64::INFINITY,
        }
    }
}

/// Blade state at a satellite elevation/azimuth.
pub fn blade_state(rotor: &RotorSpec, elevation_deg: f64, azimuth_deg: f64) -> Result<BladeState, BladeError> {
    let relative = rotor.shaft_bearing_deg.map_or(0.0, |b| azimuth_deg - b);
    let Some(d) = interference_point_at_azimuth(rotor, elevation_deg, relative)? else {
        return Ok(BladeState::Clear);
    };
    if d <= 0.0 {
        return Ok(BladeState::Blocked);
    }
    let geom = geometry(rotor, d)?;
    match schedule(rotor, &geom) {
        Ok(s) => Ok(BladeState::Periodic(s, geom)),
        Err(BladeError::Overlap { .. }) => Ok(BladeState::Blocked),
        Err(e) => Err(e),
    }
}

/// Half-open blocked interval in ms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start_ms: f64,
    pub stop_ms: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.stop_ms - self.start_ms
    }

    pub fn is_empty(&self) -> bool {
        self.stop_ms <= self.start_ms
    }
}

/// Periodic blocked intervals over `[0, span_ms)`; the first blade arrives at `phase_ms`.
pub fn erasure_schedule(schedule: &BladeSchedule, span_ms: f64, phase_ms: f64) -> Vec<Interval> {
    let mut out = Vec::new();
    if schedule.t_int_ms <= 0.0 || span_ms <= 0.0 {
        return out;
    }
    let period = schedule.period_ms();
    let phase = phase_ms.rem_euclid(period);
    // interval that started before 0 may still be running
    let mut k: i64 = if phase > 0.0 { -1 } else { 0 };
    loop {
        let start = phase + k as f64 * period;
        if start >= span_ms {
            break;
        }
        let iv = Interval { start_ms: start.max(0.0), stop_ms: (start + schedule.t_int_ms).min(span_ms) };
        if !iv.is_empty() {
            out.push(iv);
        }
        k += 1;
    }
    out
}

/// Relative timing of two rotors at the same geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedComparison {
    /// t_int(a) / t_int(b).
    pub t_int_ratio: f64,
    /// T_rot(a) / T_rot(b).
    pub rotation_time_ratio: f64,
    /// t_lnk(a) / t_lnk(b).
    pub t_lnk_ratio: f64,
}

pub fn speed_comparison(
    rotor_a: &RotorSpec,
    rotor_b: &RotorSpec,
    geometry: &BladeGeometry,
) -> Result<SpeedComparison, BladeError> {
    let a = schedule(rotor_a, geometry)?;
    let b = schedule(rotor_b, geometry)?;
    Ok(SpeedComparison {
        t_int_ratio: a.t_int_ms / b.t_int_ms,
        rotation_time_ratio: a.rotation_time_ms / b.rotation_time_ms,
        t_lnk_ratio: a.t_lnk_ms / b.t_lnk_ms,
    })
}

// ============================================================================
// Blockage over a time window
// ============================================================================

/// Blocked intervals over a window starting at `window_start_s` and lasting
/// `span_ms`, following the serving geometry of `access`.
///
/// The schedule is re-derived at each access sample inside the window and
/// only replaced when t_int moves by more than 5 %; blade phase is carried
/// continuously across replacements. Outage samples leave the schedule as is.
pub fn blocked_intervals(
    rotor: &RotorSpec,
    access: &[AccessSample],
    window_start_s: f64,
    span_ms: f64,
    phase_ms: f64,
) -> Result<(Vec<Interval>, Vec<BladeSample>), BladeError> {
    let window_end_s = window_start_s + span_ms / 1000.0;
    // sample in force at window start plus those that fall inside
    let first = access.iter().rposition(|s| s.time_s <= window_start_s).unwrap_or(0);
    let mut changes: Vec<(f64, BladeState, f64, f64)> = Vec::new();
    let mut current_t_int: Option<f64> = None;
    for s in access[first..].iter().take_while(|s| s.time_s < window_end_s) {
        let Some(v) = s.view else { continue };
        if v.elevation_deg <= 0.0 {
            continue;
        }
        let state = blade_state(rotor, v.elevation_deg, v.azimuth_deg)?;
        let t = state.t_int_ms();
        let replace = match current_t_int {
            None => true,
            Some(c) if c == 0.0 || !c.is_finite() || !t.is_finite() => c != t,
            Some(c) => ((t - c) / c).abs() > 0.05,
        };
        if replace {
            let at_ms = ((s.time_s - window_start_s) * 1000.0).max(0.0);
            changes.push((at_ms, state, v.elevation_deg, v.azimuth_deg));
            current_t_int = Some(t);
        }
    }

    let mut intervals = Vec::new();
    let mut samples = Vec::new();
    let mut next_blade_ms = phase_ms;
    for (i, (from_ms, state, elevation_deg, _)) in changes.iter().enumerate() {
        let to_ms = changes.get(i + 1).map_or(span_ms, |c| c.0);
        samples.push(BladeSample::new(*elevation_deg, state));
        match state {
            BladeState::Clear => {}
            BladeState::Blocked => intervals.push(Interval { start_ms: *from_ms, stop_ms: to_ms }),
            BladeState::Periodic(sched, _) => {
                let period = sched.period_ms();
                if next_blade_ms < *from_ms || next_blade_ms > *from_ms + period {
                    next_blade_ms = *from_ms + (next_blade_ms - *from_ms).rem_euclid(period);
                }
                // blade already covering the point at segment start
                let prev = next_blade_ms - period;
                if prev + sched.t_int_ms > *from_ms {
                    intervals.push(Interval { start_ms: *from_ms, stop_ms: (prev + sched.t_int_ms).min(to_ms) });
                }
                while next_blade_ms < to_ms {
                    intervals.push(Interval {
                        start_ms: next_blade_ms,
                        stop_ms: (next_blade_ms + sched.t_int_ms).min(to_ms),
                    });
                    next_blade_ms += period;
                }
            }
        }
    }
    intervals.retain(|iv| !iv.is_empty());
    Ok((intervals, samples))
}

/// One row of the blade schedule export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BladeSample {
    pub elevation_deg: f64,
    pub d_rotor_m: Option<f64>,
    pub phi_deg: Option<f64>,
    pub t_int_ms: f64,
    pub t_lnk_ms: Option<f64>,
    pub duty_cycle: f64,
}

impl BladeSample {
    pub fn new(elevation_deg: f64, state: &BladeState) -> Self {
        match state {
            BladeState::Clear => Self {
                elevation_deg,
                d_rotor_m: None,
                phi_deg: None,
                t_int_ms: 0.0,
                t_lnk_ms: None,
                duty_cycle: 0.0,
            },
            BladeState::Blocked => Self {
                elevation_deg,
                d_rotor_m: None,
                phi_deg: None,
                t_int_ms: f64::INFINITY,
                t_lnk_ms: Some(0.0),
                duty_cycle: 1.0,
            },
            BladeState::Periodic(s, g) => Self {
                elevation_deg,
                d_rotor_m: Some(g.d_rotor_m),
                phi_deg: Some(g.phi_deg),
                t_int_ms: s.t_int_ms,
                t_lnk_ms: Some(s.t_lnk_ms),
                duty_cycle: s.duty_cycle(),
            },
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_blade_csv<W: std::io::Write>(rows: &[BladeSample], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["elevation_deg", "d_rotor_m", "phi_deg", "t_int_ms", "t_lnk_ms", "duty_cycle"])?;
    for r in rows {
        w.write_record([
            r.elevation_deg.to_string(),
            opt(r.d_rotor_m),
            opt(r.phi_deg),
            r.t_int_ms.to_string(),
            opt(r.t_lnk_ms),
            r.duty_cycle.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rotor(n: u32, rpm: f64) -> RotorSpec {
        RotorSpec {
            n_blades: n,
            blade_width_m: 0.1,
            rotor_rpm: rpm,
            shaft_offset_m: 0.0,
            rotor_height_m: 0.5,
            tip_radius_m: 2.0,
            shaft_bearing_deg: None,
        }
    }

    #[test]
    fn interference_point_cases() {
        let r = rotor(2, 400.0);
        assert_relative_eq!(interference_point(&r, 45.0).unwrap().unwrap(), 0.5, epsilon = 1e-12);
        let r1 = RotorSpec { shaft_offset_m: 1.0, ..r.clone() };
        assert_relative_eq!(interference_point(&r1, 90.0).unwrap().unwrap(), 1.0);
        // low elevation: crossing at 0.5/tan(10°) ≈ 2.84 m, past the 2 m tip
        assert_eq!(interference_point(&r, 10.0).unwrap(), None);
        assert!(matches!(interference_point(&r, 0.0), Err(BladeError::Elevation(_))));
    }

    #[test]
    fn azimuth_override_matches_coplanar_at_zero_and_opposite_side() {
        let r = RotorSpec { shaft_offset_m: 1.0, ..rotor(2, 400.0) };
        let reach = 0.5 / 30f64.to_radians().tan();
        let away = interference_point_at_azimuth(&r, 30.0, 180.0).unwrap().unwrap();
        assert_relative_eq!(away, 1.0 + reach, epsilon = 1e-12);
    }

    #[test]
    fn blade_angle_cases() {
        assert_relative_eq!(blade_angle(2.0 * PI * 1.5, 1.5).unwrap(), 360.0, epsilon = 1e-9);
        assert!((blade_angle(0.1745, 1.0).unwrap() - 10.0).abs() < 0.01);
        let a = blade_angle(0.2, 1.0).unwrap();
        assert_relative_eq!(blade_angle(0.2, 2.0).unwrap(), a / 2.0, epsilon = 1e-12);
        assert!(blade_angle(0.0, 1.0).is_err());
        assert!(blade_angle(0.1, -1.0).is_err());
        assert_eq!(blade_angle(100.0, 1.0).unwrap(), 360.0);
    }

    #[test]
    fn schedule_direct_evaluation() {
        let s = schedule(&rotor(4, 400.0), &BladeGeometry { d_rotor_m: 1.0, phi_deg: 10.0 }).unwrap();
        assert_relative_eq!(s.rate_deg_per_ms, 2.4, epsilon = 1e-12);
        assert!((s.t_int_ms - 4.167).abs() < 1e-3);
        assert_relative_eq!(s.rotation_time_ms, 150.0, epsilon = 1e-12);
        assert!((s.total_link_time_ms - 133.33).abs() < 1e-2);
        assert!((s.t_lnk_ms - 33.33).abs() < 1e-2);
    }

    #[test]
    fn single_blade() {
        let s = schedule(&rotor(1, 400.0), &BladeGeometry { d_rotor_m: 1.0, phi_deg: 10.0 }).unwrap();
        assert_relative_eq!(s.t_lnk_ms, s.rotation_time_ms - s.t_int_ms, epsilon = 1e-12);
    }

    #[test]
    fn overlap_error() {
        let e = schedule(&rotor(4, 400.0), &BladeGeometry { d_rotor_m: 0.1, phi_deg: 100.0 }).unwrap_err();
        assert!(matches!(e, BladeError::Overlap { .. }));
    }

    fn sched(t_int: f64, t_lnk: f64) -> BladeSchedule {
        BladeSchedule {
            n_blades: 1,
            t_int_ms: t_int,
            t_lnk_ms: t_lnk,
            rotation_time_ms: t_int + t_lnk,
            total_link_time_ms: t_lnk,
            rate_deg_per_ms: 1.0,
        }
    }

    #[test]
    fn erasure_pattern_examples() {
        let iv = erasure_schedule(&sched(1.6, 13.9), 31.0, 0.0);
        assert_eq!(iv.len(), 2);
        assert_relative_eq!(iv[0].start_ms, 0.0);
        assert_relative_eq!(iv[0].stop_ms, 1.6);
        assert_relative_eq!(iv[1].start_ms, 15.5);
        assert_relative_eq!(iv[1].stop_ms, 17.1, epsilon = 1e-12);

        assert!(erasure_schedule(&sched(0.0, 13.9), 31.0, 0.0).is_empty());

        let short = erasure_schedule(&sched(1.6, 13.9), 1.0, 0.0);
        assert_eq!(short, vec![Interval { start_ms: 0.0, stop_ms: 1.0 }]);
    }

    #[test]
    fn erasure_with_phase_keeps_running_blade() {
        let iv = erasure_schedule(&sched(2.0, 8.0), 20.0, 9.0);
        assert_eq!(iv[0], Interval { start_ms: 0.0, stop_ms: 1.0 });
        assert_eq!(iv[1], Interval { start_ms: 9.0, stop_ms: 11.0 });
    }

    #[test]
    fn speed_ratios() {
        let g = BladeGeometry { d_rotor_m: 1.0, phi_deg: 8.0 };
        let c = speed_comparison(&rotor(3, 1280.0), &rotor(3, 400.0), &g).unwrap();
        assert_relative_eq!(c.t_int_ratio, 1.0 / 3.2, max_relative = 1e-12);
        let same = speed_comparison(&rotor(3, 400.0), &rotor(3, 400.0), &g).unwrap();
        assert_eq!(same.t_int_ratio, 1.0);
        let two = speed_comparison(&rotor(3, 800.0), &rotor(3, 400.0), &g).unwrap();
        assert_relative_eq!(two.rotation_time_ratio, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn validate_rejects_single_blade_config() {
        assert!(rotor(1, 400.0).validate().is_err());
        assert!(rotor(2, 400.0).validate().is_ok());
    }
}
