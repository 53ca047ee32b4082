//! Link budget along the access timeline: free-space loss, a simplified
//! Earth–space impairment model (gaseous, cloud, rain), antenna pointing and
//! carrier-to-noise ratio.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orbit::{AccessSample, TopocentricView};
use crate::scenario::{AircraftAntenna, AntennaType, Band, LinkDirection, ScenarioSpec};

/// Boltzmann constant, −10·log10(k) in dB.
pub const BOLTZMANN_DB: f64 = 228.6;

#[derive(Debug, Error, PartialEq)]
pub enum LinkError {
    #[error("{name} must be positive, got {value}")]
    Domain { name: &'static str, value: f64 },
    #[error("reduced bandwidth {reduced} MHz exceeds channel bandwidth {original} MHz")]
    BandwidthIncrease { original: f64, reduced: f64 },
    #[error("no {band:?}-band payload on constellation {constellation}")]
    MissingPayload { band: Band, constellation: String },
    #[error("no {band:?}-band antenna on aircraft {aircraft}")]
    MissingAntenna { band: Band, aircraft: String },
    #[error("empty access timeline")]
    EmptyTimeline,
}

// ============================================================================
// Loss model configuration
// ============================================================================

/// Zenith attenuations for one band (dB).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenithLoss {
    pub gaseous_db: f64,
    pub cloud_db: f64,
}

/// Rain specific-attenuation coefficients `γ = k·R^α` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RainCoefficient {
    pub frequency_ghz: f64,
    pub k: f64,
    pub alpha: f64,
}

/// Simplified Earth–space loss and link-margin parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LossModel {
    pub s_band: ZenithLoss,
    pub ku_band: ZenithLoss,
    pub ka_band: ZenithLoss,
    /// Rain height above the terminal (km).
    pub rain_height_km: f64,
    /// Upper bound on the slant path through rain (km).
    pub rain_path_cap_km: f64,
    /// Sorted by frequency; interpolated log-log for k and log-linear for α.
    pub rain_coefficients: Vec<RainCoefficient>,
    /// Polarization and implementation losses (dB).
    pub margin_db: f64,
    /// Antenna back-lobe gain floor (dBi).
    pub backlobe_floor_dbi: f64,
}

impl Default for LossModel {
    fn default() -> Self {
        Self {
            s_band: ZenithLoss { gaseous_db: 0.035, cloud_db: 0.0 },
            ku_band: ZenithLoss { gaseous_db: 0.08, cloud_db: 0.05 },
            ka_band: ZenithLoss { gaseous_db: 0.25, cloud_db: 0.3 },
            rain_height_km: 3.0,
            rain_path_cap_km: 20.0,
            rain_coefficients: default_rain_coefficients(),
            margin_db: 0.0,
            backlobe_floor_dbi: -10.0,
        }
    }
}

/// Horizontal-polarization power-law coefficients (ITU-R P.838 style).
pub fn default_rain_coefficients() -> Vec<RainCoefficient> {
    [
        (1.0, 0.0000259, 0.9691),
        (2.0, 0.0000847, 1.0664),
        (4.0, 0.0001071, 1.6009),
        (10.0, 0.01217, 1.2571),
        (12.0, 0.02386, 1.1825),
        (15.0, 0.04481, 1.1233),
        (20.0, 0.09164, 1.0568),
        (25.0, 0.1571, 0.9991),
        (30.0, 0.2403, 0.9485),
        (40.0, 0.4431, 0.8673),
    ]
    .into_iter()
    .map(|(frequency_ghz, k, alpha)| RainCoefficient { frequency_ghz, k, alpha })
    .collect()
}

impl LossModel {
    pub fn zenith(&self, band: Band) -> ZenithLoss {
        match band {
            Band::S => self.s_band,
            Band::Ku => self.ku_band,
            Band::Ka => self.ka_band,
        }
    }

    /// `(k, α)` at `frequency_ghz`, clamped to the table ends.
    pub fn rain_coefficient(&self, frequency_ghz: f64) -> (f64, f64) {
        let table = &self.rain_coefficients;
        let first = table[0];
        let last = table[table.len() - 1];
        if frequency_ghz <= first.frequency_ghz {
            return (first.k, first.alpha);
        }
        if frequency_ghz >= last.frequency_ghz {
            return (last.k, last.alpha);
        }
        let i = table.partition_point(|c| c.frequency_ghz <= frequency_ghz);
        let (lo, hi) = (table[i - 1], table[i]);
        if lo.frequency_ghz == frequency_ghz {
            return (lo.k, lo.alpha);
        }
        let w = (frequency_ghz.ln() - lo.frequency_ghz.ln()) / (hi.frequency_ghz.ln() - lo.frequency_ghz.ln());
        let k = (lo.k.ln() + w * (hi.k.ln() - lo.k.ln())).exp();
        let alpha = lo.alpha + w * (hi.alpha - lo.alpha);
        (k, alpha)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, z) in [("s_band", self.s_band), ("ku_band", self.ku_band), ("ka_band", self.ka_band)] {
            if !(z.gaseous_db >= 0.0 && z.cloud_db >= 0.0) {
                return Err(format!("loss_model.{name} zenith losses must be >= 0"));
            }
        }
        if !(self.rain_height_km >= 0.0 && self.rain_path_cap_km >= 0.0) {
            return Err("loss_model rain height and path cap must be >= 0".into());
        }
        if self.rain_coefficients.is_empty()
            || self.rain_coefficients.windows(2).any(|w| w[1].frequency_ghz <= w[0].frequency_ghz)
            || self.rain_coefficients.iter().any(|c| !(c.frequency_ghz > 0.0 && c.k > 0.0 && c.alpha > 0.0))
        {
            return Err("loss_model.rain_coefficients must be non-empty, positive and sorted by frequency".into());
        }
        if !(self.margin_db >= 0.0) {
            return Err("loss_model.margin_db must be >= 0".into());
        }
        Ok(())
    }
}

// ============================================================================
// Losses
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub fspl_db: f64,
    pub gaseous_db: f64,
    pub rain_db: f64,
    pub cloud_db: f64,
    pub total_db: f64,
}

impl LossBreakdown {
    pub fn new(fspl_db: f64, gaseous_db: f64, rain_db: f64, cloud_db: f64) -> Self {
        Self { fspl_db, gaseous_db, rain_db, cloud_db, total_db: fspl_db + gaseous_db + rain_db + cloud_db }
    }
}

/// Free-space path loss (dB) for a distance in km and a frequency in GHz.
pub fn fspl(distance_km: f64, frequency_ghz: f64) -> Result<f64, LinkError> {
    if !(distance_km > 0.0) {
        return Err(LinkError::Domain { name: "distance_km", value: distance_km });
    }
    if !(frequency_ghz > 0.0) {
        return Err(LinkError::Domain { name: "frequency_ghz", value: frequency_ghz });
    }
    Ok(92.45 + 20.0 * distance_km.log10() + 20.0 * frequency_ghz.log10())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtmosphericLoss {
    pub gaseous_db: f64,
    pub rain_db: f64,
    pub cloud_db: f64,
}

/// Gaseous, rain and cloud attenuation along the slant path.
pub fn atmospheric_loss(
    elevation_deg: f64,
    frequency_ghz: f64,
    rain_rate_mm_h: f64,
    model: &LossModel,
) -> Result<AtmosphericLoss, LinkError> {
    if !(elevation_deg > 0.0) {
        return Err(LinkError::Domain { name: "elevation_deg", value: elevation_deg });
    }
    let csc = 1.0 / elevation_deg.to_radians().sin();
    let zenith = model.zenith(Band::from_frequency(frequency_ghz));
    let rain_db = if rain_rate_mm_h > 0.0 {
        let (k, alpha) = model.rain_coefficient(frequency_ghz);
        let path = (model.rain_height_km * csc).min(model.rain_path_cap_km);
        k * rain_rate_mm_h.powf(alpha) * path
    } else {
        0.0
    };
    Ok(AtmosphericLoss { gaseous_db: zenith.gaseous_db * csc, rain_db, cloud_db: zenith.cloud_db * csc })
}

// ============================================================================
// Antennas and CNR
// ============================================================================

/// Parabolic main-lobe gain at `offset_deg` from boresight, floored at `floor_dbi`.
pub fn off_boresight_gain(max_gain_dbi: f64, hpbw_deg: f64, offset_deg: f64, floor_dbi: f64) -> f64 {
    (max_gain_dbi - 12.0 * (offset_deg / hpbw_deg).powi(2)).max(floor_dbi)
}

/// Angle between the aircraft antenna boresight and the satellite (deg).
///
/// Steerable antennas track the satellite down to their minimum steering
/// elevation. Fixed antennas point at `boresight_elevation_deg` in level flight.
pub fn pointing_offset(antenna: &AircraftAntenna, view: &TopocentricView) -> f64 {
    if antenna.antenna_type.is_steerable() {
        return (antenna.steering_min_elevation_deg - view.elevation_deg).max(0.0);
    }
    // boresight straight up unless tilted; tilted boresights face north
    let b_el = antenna.boresight_elevation_deg.to_radians();
    let b_az = antenna.boresight_azimuth_deg.to_radians();
    let s_el = view.elevation_deg.to_radians();
    let s_az = view.azimuth_deg.to_radians();
    let cos = b_el.sin() * s_el.sin() + b_el.cos() * s_el.cos() * (b_az - s_az).cos();
    cos.clamp(-1.0, 1.0).acos().to_degrees()
}

/// Carrier-to-noise ratio (dB) over `bandwidth_mhz`.
pub fn compute_cnr(eirp_dbw: f64, gain_over_t_dbk: f64, loss_total_db: f64, pointing_penalty_db: f64, bandwidth_mhz: f64) -> f64 {
    eirp_dbw - pointing_penalty_db + gain_over_t_dbk - loss_total_db + BOLTZMANN_DB - 10.0 * (bandwidth_mhz * 1e6).log10()
}

/// CNR over a narrower channel.
pub fn rescale_cnr(cnr_db: f64, bandwidth_mhz: f64, reduced_bandwidth_mhz: f64) -> Result<f64, LinkError> {
    if !(bandwidth_mhz > 0.0) {
        return Err(LinkError::Domain { name: "bandwidth_mhz", value: bandwidth_mhz });
    }
    if !(reduced_bandwidth_mhz > 0.0) {
        return Err(LinkError::Domain { name: "reduced_bandwidth_mhz", value: reduced_bandwidth_mhz });
    }
    if reduced_bandwidth_mhz > bandwidth_mhz {
        return Err(LinkError::BandwidthIncrease { original: bandwidth_mhz, reduced: reduced_bandwidth_mhz });
    }
    Ok(cnr_db + 10.0 * (bandwidth_mhz / reduced_bandwidth_mhz).log10())
}

/// Link budget at one timeline step; `loss` is absent during outage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSample {
    pub time_s: f64,
    pub loss: Option<LossBreakdown>,
    pub tx_gain_dbi: f64,
    pub rx_gain_over_t_dbk: f64,
    /// `-inf` when no satellite serves.
    pub cnr_db: f64,
    pub bandwidth_mhz: f64,
    pub doppler_khz: Option<f64>,
    pub elevation_deg: Option<f64>,
}

impl LinkSample {
    pub fn is_outage(&self) -> bool {
        self.cnr_db == f64::NEG_INFINITY
    }
}

/// Link budget for every access sample of a scenario.
///
/// Uplink uses the aircraft EIRP against the satellite G/T, downlink the
/// satellite beam EIRP against the aircraft G/T. Satellite beams are assumed
/// centred on the aircraft; the aircraft antenna pattern sets the pointing penalty.
pub fn link_timeline(access: &[AccessSample], scenario: &ScenarioSpec) -> Result<Vec<LinkSample>, LinkError> {
    if access.is_empty() {
        return Err(LinkError::EmptyTimeline);
    }
    let payload = scenario.payload().ok_or_else(|| LinkError::MissingPayload {
        band: scenario.band,
        constellation: scenario.constellation.name.clone(),
    })?;
    let antenna = scenario.antenna().ok_or_else(|| LinkError::MissingAntenna {
        band: scenario.band,
        aircraft: scenario.aircraft.name.clone(),
    })?;
    let model = &scenario.loss_model;
    let bandwidth_mhz = antenna.bandwidth_mhz;

    access
        .iter()
        .map(|s| {
            let (Some(view), true) = (s.view, s.is_served()) else {
                return Ok(LinkSample {
                    time_s: s.time_s,
                    loss: None,
                    tx_gain_dbi: f64::NAN,
                    rx_gain_over_t_dbk: f64::NAN,
                    cnr_db: f64::NEG_INFINITY,
                    bandwidth_mhz,
                    doppler_khz: None,
                    elevation_deg: None,
                });
            };
            let free = fspl(view.slant_range_km, scenario.carrier_ghz)?;
            let rain_rate = scenario.rain_profile.rate_at(s.time_s);
            let atm = atmospheric_loss(view.elevation_deg, scenario.carrier_ghz, rain_rate, model)?;
            let loss = LossBreakdown::new(free, atm.gaseous_db, atm.rain_db, atm.cloud_db);

            let offset = pointing_offset(antenna, &view);
            let aircraft_gain =
                off_boresight_gain(antenna.max_gain_dbi, antenna.hpbw_deg(), offset, model.backlobe_floor_dbi);
            let (eirp, tx_gain, gt) = match scenario.link_direction {
                LinkDirection::Uplink => {
                    (antenna.tx_power_dbw + aircraft_gain, aircraft_gain, payload.gt_dbk)
                }
                LinkDirection::Downlink => {
                    let gt = aircraft_gain - 10.0 * antenna.noise_temperature_k.log10();
                    (payload.beam_eirp_dbw, f64::NAN, gt)
                }
            };
            let cnr = compute_cnr(eirp, gt, loss.total_db, model.margin_db, bandwidth_mhz);
            Ok(LinkSample {
                time_s: s.time_s,
                loss: Some(loss),
                tx_gain_dbi: tx_gain,
                rx_gain_over_t_dbk: gt,
                cnr_db: cnr,
                bandwidth_mhz,
                doppler_khz: s.doppler_khz,
                elevation_deg: Some(view.elevation_deg),
            })
        })
        .collect()
}

pub fn write_link_csv<W: std::io::Write>(samples: &[LinkSample], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["time_s", "fspl_db", "gas_db", "rain_db", "cloud_db", "total_db", "doppler_khz", "cnr_db"])?;
    for s in samples {
        let mut row = vec![s.time_s.to_string()];
        match s.loss {
            Some(l) => row.extend([l.fspl_db, l.gaseous_db, l.rain_db, l.cloud_db, l.total_db].map(|v| v.to_string())),
            None => row.extend(std::iter::repeat_n(String::new(), 5)),
        }
        row.push(s.doppler_khz.map(|d| d.to_string()).unwrap_or_default());
        row.push(s.cnr_db.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

impl AntennaType {
    pub fn is_steerable(&self) -> bool {
        matches!(self, AntennaType::PhasedArraySteerable | AntennaType::ParabolicSteerable)
    }
}
