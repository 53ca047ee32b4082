//! 5G-NTN configuration space and slot-level frame simulation.
//!
//! Waveform processing is abstracted: each slot carries one transport block
//! whose bit errors follow the AWGN bit-error probability at the slot CNR,
//! shifted by a fixed coding gain. Slots hit by rotor blades are erased.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use thiserror::Error;

use crate::blades::Interval;
use crate::link::LinkSample;

#[derive(Debug, Error, PartialEq)]
pub enum PhyError {
    #[error("unsupported subcarrier spacing {0} kHz")]
    UnsupportedScs(u32),
    #[error("carrier {carrier_ghz} GHz outside {band} {direction:?} range [{min}, {max}] GHz")]
    CarrierOutOfBand { band: NtnBandName, direction: Direction, carrier_ghz: f64, min: f64, max: f64 },
    #[error("channel bandwidth {0} MHz not allowed")]
    BandwidthNotAllowed(f64),
    #[error("subcarrier spacing {0} kHz not allowed in this band")]
    ScsNotAllowed(u32),
    #[error("{n_rb} resource blocks outside [{min}, {max}]")]
    RbOutOfRange { n_rb: u32, min: u32, max: u32 },
    #[error("invalid MCS: {0}")]
    InvalidMcs(String),
    #[error("overhead fraction must be in [0, 1], got {0}")]
    Overhead(f64),
    #[error("no slot results to aggregate")]
    Empty,
}

// ============================================================================
// Numerology and bands
// ============================================================================

/// Frame structure for one subcarrier spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Numerology {
    pub scs_khz: u32,
    pub slots_per_frame: u32,
    pub slot_length_ms: f64,
    pub rb_range: (u32, u32),
    pub bw_range_mhz: (f64, f64),
}

pub const SUPPORTED_SCS_KHZ: [u32; 4] = [15, 30, 60, 120];

pub const FRAME_LENGTH_MS: f64 = 10.0;

pub fn numerology_for(scs_khz: u32) -> Result<Numerology, PhyError> {
    let (slots_per_frame, slot_length_ms, rb_range, bw_range_mhz) = match scs_khz {
        15 => (10, 1.0, (25, 160), (5.0, 30.0)),
        30 => (20, 0.5, (11, 78), (5.0, 30.0)),
        60 => (40, 0.25, (11, 264), (10.0, 200.0)),
        120 => (80, 0.125, (32, 264), (50.0, 400.0)),
        other => return Err(PhyError::UnsupportedScs(other)),
    };
    Ok(Numerology { scs_khz, slots_per_frame, slot_length_ms, rb_range, bw_range_mhz })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NtnBandName {
    N254,
    N255,
    N256,
    N510,
    N511,
    N512,
}

impl std::fmt::Display for NtnBandName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NtnBandName::N254 => "n254",
            NtnBandName::N255 => "n255",
            NtnBandName::N256 => "n256",
            NtnBandName::N510 => "n510",
            NtnBandName::N511 => "n511",
            NtnBandName::N512 => "n512",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyRange {
    Fr1,
    Fr2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Uplink,
    Downlink,
}

/// NTN operating band and its channel arrangement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NtnBand {
    pub name: NtnBandName,
    pub range: FrequencyRange,
    pub ul_range_ghz: (f64, f64),
    pub dl_range_ghz: (f64, f64),
    pub channel_bws_mhz: &'static [f64],
    pub scs_options_khz: &'static [u32],
}

const FR1_SCS: &[u32] = &[15, 30, 60];
const FR2_SCS: &[u32] = &[60, 120];
const FR2_BW: &[f64] = &[50.0, 100.0, 200.0, 400.0];

impl NtnBand {
    pub fn get(name: NtnBandName) -> NtnBand {
        use NtnBandName::*;
        let (range, ul, dl, bws, scs): (_, _, _, &'static [f64], _) = match name {
            N254 => (FrequencyRange::Fr1, (1.61, 1.63), (2.48, 2.50), &[5.0, 10.0, 15.0], FR1_SCS),
            N255 => (FrequencyRange::Fr1, (1.63, 1.66), (1.53, 1.56), &[5.0, 10.0, 15.0, 20.0], FR1_SCS),
            N256 => (FrequencyRange::Fr1, (1.98, 2.01), (2.17, 2.20), &[5.0, 10.0, 15.0, 20.0, 30.0], FR1_SCS),
            N510 => (FrequencyRange::Fr2, (27.50, 28.35), (17.30, 20.20), FR2_BW, FR2_SCS),
            N511 => (FrequencyRange::Fr2, (28.35, 30.00), (17.30, 20.20), FR2_BW, FR2_SCS),
            N512 => (FrequencyRange::Fr2, (27.50, 30.00), (17.30, 20.20), FR2_BW, FR2_SCS),
        };
        NtnBand { name, range, ul_range_ghz: ul, dl_range_ghz: dl, channel_bws_mhz: bws, scs_options_khz: scs }
    }

    pub fn all() -> Vec<NtnBand> {
        use NtnBandName::*;
        [N254, N255, N256, N510, N511, N512].into_iter().map(NtnBand::get).collect()
    }

    pub fn range_for(&self, direction: Direction) -> (f64, f64) {
        match direction {
            Direction::Uplink => self.ul_range_ghz,
            Direction::Downlink => self.dl_range_ghz,
        }
    }
}

/// A channel whose carrier, bandwidth and numerology have been checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Channel {
    /// `None` for carriers outside the NTN band plan (e.g. Ku comparison links).
    pub band: Option<NtnBandName>,
    pub direction: Direction,
    pub carrier_ghz: f64,
    pub bandwidth_mhz: f64,
    pub numerology: Numerology,
}

/// Checks a channel against an NTN band's arrangement and the numerology.
pub fn validate_channel(
    band: &NtnBand,
    direction: Direction,
    carrier_ghz: f64,
    bandwidth_mhz: f64,
    scs_khz: u32,
) -> Result<Channel, PhyError> {
    let (min, max) = band.range_for(direction);
    if !(carrier_ghz >= min && carrier_ghz <= max) {
        return Err(PhyError::CarrierOutOfBand { band: band.name, direction, carrier_ghz, min, max });
    }
    if !band.channel_bws_mhz.contains(&bandwidth_mhz) {
        return Err(PhyError::BandwidthNotAllowed(bandwidth_mhz));
    }
    if !band.scs_options_khz.contains(&scs_khz) {
        return Err(PhyError::ScsNotAllowed(scs_khz));
    }
    let mut ch = custom_channel(direction, carrier_ghz, bandwidth_mhz, scs_khz)?;
    ch.band = Some(band.name);
    Ok(ch)
}

/// Channel checked only against the numerology's bandwidth range.
pub fn custom_channel(direction: Direction, carrier_ghz: f64, bandwidth_mhz: f64, scs_khz: u32) -> Result<Channel, PhyError> {
    let numerology = numerology_for(scs_khz)?;
    let (lo, hi) = numerology.bw_range_mhz;
    if !(bandwidth_mhz >= lo && bandwidth_mhz <= hi) {
        return Err(PhyError::BandwidthNotAllowed(bandwidth_mhz));
    }
    Ok(Channel { band: None, direction, carrier_ghz, bandwidth_mhz, numerology })
}

// ============================================================================
// Modulation and coding
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modulation {
    #[serde(rename = "QPSK")]
    Qpsk,
    #[serde(rename = "16QAM")]
    Qam16,
    #[serde(rename = "64QAM")]
    Qam64,
}

impl std::fmt::Display for Modulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Modulation::Qpsk => "QPSK",
            Modulation::Qam16 => "16QAM",
            Modulation::Qam64 => "64QAM",
        })
    }
}

impl Modulation {
    pub fn bits_per_symbol(&self) -> u32 {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam64 => 6,
        }
    }

    /// Amplitude levels per I/Q dimension.
    pub fn levels_per_dimension(&self) -> u32 {
        1 << (self.bits_per_symbol() / 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McsConfig {
    pub modulation: Modulation,
    pub code_rate: f64,
    /// Eb/N0 gain of the channel code over uncoded transmission (dB).
    #[serde(default = "default_coding_gain")]
    pub coding_gain_db: f64,
}

fn default_coding_gain() -> f64 {
    6.0
}

impl McsConfig {
    pub fn new(modulation: Modulation, code_rate: f64, coding_gain_db: f64) -> Result<Self, PhyError> {
        let m = Self { modulation, code_rate, coding_gain_db };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), PhyError> {
        if !(self.code_rate > 0.0 && self.code_rate < 1.0) {
            return Err(PhyError::InvalidMcs(format!("code rate {} not in (0, 1)", self.code_rate)));
        }
        if !(self.coding_gain_db >= 0.0) {
            return Err(PhyError::InvalidMcs(format!("coding gain {} dB is negative", self.coding_gain_db)));
        }
        Ok(())
    }

    /// Information bits per modulation symbol.
    pub fn spectral_efficiency(&self) -> f64 {
        self.modulation.bits_per_symbol() as f64 * self.code_rate
    }
}

/// Transport block bits per slot: 12 subcarriers × 14 symbols per RB.
pub fn transport_block_size(
    n_rb: u32,
    numerology: &Numerology,
    mcs: &McsConfig,
    overhead_fraction: f64,
) -> Result<u64, PhyError> {
    let (min, max) = numerology.rb_range;
    if n_rb < min || n_rb > max {
        return Err(PhyError::RbOutOfRange { n_rb, min, max });
    }
    if !(0.0..=1.0).contains(&overhead_fraction) {
        return Err(PhyError::Overhead(overhead_fraction));
    }
    let bits = n_rb as f64 * 12.0 * 14.0 * mcs.modulation.bits_per_symbol() as f64 * mcs.code_rate * (1.0 - overhead_fraction);
    Ok(bits.floor() as u64)
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Gray-mapped L-PAM bit error probability with unit half-spacing and
/// `inv_sigma` = 1/σ, summed exactly over every decision region.
fn gray_pam_ber(levels: u32, inv_sigma: f64) -> f64 {
    let l = levels as i64;
    let bits = levels.trailing_zeros() as f64;
    let gray = |j: i64| j ^ (j >> 1);
    // Q evaluated at a region boundary offset from the transmitted level
    let tail = |boundary: Option<i64>, level: i64| match boundary {
        None => 1.0,
        Some(b) => q_function((b - level) as f64 * inv_sigma),
    };
    let mut total = 0.0;
    for j in 0..l {
        let level = 2 * j - (l - 1);
        for r in 0..l {
            let diff = (gray(j) ^ gray(r)).count_ones();
            if diff == 0 {
                continue;
            }
            let lower = (r > 0).then(|| 2 * r - l);
            let upper = (r < l - 1).then(|| 2 * (r + 1) - l);
            let p_lower = tail(lower, level);
            let p_upper = if upper.is_some() { tail(upper, level) } else { 0.0 };
            total += (p_lower - p_upper) * diff as f64;
        }
    }
    total / (l as f64 * bits)
}

/// Uncoded Gray-mapped bit error rate on AWGN at `ebn0_db`.
pub fn uncoded_ber(modulation: Modulation, ebn0_db: f64) -> f64 {
    if ebn0_db == f64::NEG_INFINITY || ebn0_db.is_nan() {
        return 0.5;
    }
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    let levels = modulation.levels_per_dimension();
    let energy_per_dim = ((levels * levels - 1) as f64) / 3.0;
    let inv_sigma = (ebn0 * modulation.bits_per_symbol() as f64 / energy_per_dim).sqrt();
    gray_pam_ber(levels, inv_sigma).clamp(0.0, 0.5)
}

/// Coded bit error probability at a channel CNR (taken as Es/N0).
pub fn awgn_ber(mcs: &McsConfig, cnr_db: f64) -> f64 {
    let ebn0_db = cnr_db - 10.0 * mcs.spectral_efficiency().log10() + mcs.coding_gain_db;
    uncoded_ber(mcs.modulation, ebn0_db)
}

// ============================================================================
// Frame simulation
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// Binomial bit-error and block-error draws.
    #[default]
    Mc,
    /// Rounded expected bit errors and decode probabilities.
    Expected,
}

/// When a partially blocked slot counts as erased.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapRule {
    /// Any nonzero overlap erases the slot.
    AnyOverlap,
    /// More than half of the slot must be blocked.
    #[default]
    Majority,
}

impl OverlapRule {
    fn erases(&self, overlap_ms: f64, slot_ms: f64) -> bool {
        match self {
            OverlapRule::AnyOverlap => overlap_ms > 0.0,
            OverlapRule::Majority => 2.0 * overlap_ms > slot_ms,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotResult {
    pub slot_index: u64,
    /// Slot start, ms since flight start.
    pub t_start_ms: f64,
    pub erased: bool,
    pub payload_bits: u64,
    pub bit_errors: u64,
    pub cnr_db: f64,
    /// 1/0 in Monte-Carlo mode, block success probability in expected mode.
    pub decoded: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameSimOptions {
    pub n_frames: u32,
    pub seed: u64,
    pub mode: SimMode,
    pub overlap_rule: OverlapRule,
    /// Flight time of the first slot (s).
    pub start_time_s: f64,
    /// Offset added to `slot_index` of the first slot.
    pub first_slot_index: u64,
    pub n_rb: u32,
    pub overhead_fraction: f64,
}

impl Default for FrameSimOptions {
    fn default() -> Self {
        Self {
            n_frames: 100,
            seed: 0,
            mode: SimMode::Mc,
            overlap_rule: OverlapRule::Majority,
            start_time_s: 0.0,
            first_slot_index: 0,
            n_rb: 11,
            overhead_fraction: 0.0,
        }
    }
}

/// SplitMix64 finalizer for deriving independent stream seeds.
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    let mut z = root ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// CNR (dB) at `time_s`, linear between samples; falls back to the nearest
/// sample when a neighbour is an outage.
pub fn interpolate_cnr(link: &[LinkSample], time_s: f64) -> f64 {
    if link.is_empty() {
        return f64::NEG_INFINITY;
    }
    let i = link.partition_point(|s| s.time_s <= time_s);
    if i == 0 {
        return link[0].cnr_db;
    }
    if i == link.len() {
        return link[i - 1].cnr_db;
    }
    let (a, b) = (&link[i - 1], &link[i]);
    let w = (time_s - a.time_s) / (b.time_s - a.time_s);
    if a.cnr_db.is_finite() && b.cnr_db.is_finite() {
        a.cnr_db + w * (b.cnr_db - a.cnr_db)
    } else if w < 0.5 {
        a.cnr_db
    } else {
        b.cnr_db
    }
}

/// Blocked time (ms) of `[start, stop)` covered by sorted disjoint `intervals`.
fn blocked_ms(intervals: &[Interval], start: f64, stop: f64) -> f64 {
    let first = intervals.partition_point(|iv| iv.stop_ms <= start);
    intervals[first..]
        .iter()
        .take_while(|iv| iv.start_ms < stop)
        .map(|iv| (iv.stop_ms.min(stop) - iv.start_ms.max(start)).max(0.0))
        .sum()
}

/// Slot-level simulation over `n_frames` 10 ms frames.
///
/// `erasures` are relative to the first slot (ms). Link CNR is rescaled
/// from the link bandwidth to the channel bandwidth.
pub fn simulate_frames(
    link: &[LinkSample],
    erasures: &[Interval],
    channel: &Channel,
    mcs: &McsConfig,
    options: &FrameSimOptions,
) -> Result<Vec<SlotResult>, PhyError> {
    mcs.validate()?;
    let num = channel.numerology;
    let payload_bits = transport_block_size(options.n_rb, &num, mcs, options.overhead_fraction)?;
    let slot_ms = num.slot_length_ms;
    let spf = num.slots_per_frame as u64;
    let bw_offset_db = link.first().map_or(0.0, |s| 10.0 * (s.bandwidth_mhz / channel.bandwidth_mhz).log10());

    let frames: Vec<Vec<SlotResult>> = (0..options.n_frames as u64)
        .into_par_iter()
        .map(|frame| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(options.seed, frame));
            (0..spf)
                .map(|k| {
                    let local = frame * spf + k;
                    let rel_start = local as f64 * slot_ms;
                    let t_start_ms = options.start_time_s * 1000.0 + rel_start;
                    let erased = options
                        .overlap_rule
                        .erases(blocked_ms(erasures, rel_start, rel_start + slot_ms), slot_ms);
                    let cnr_db = interpolate_cnr(link, (t_start_ms + 0.5 * slot_ms) / 1000.0) + bw_offset_db;
                    let (bit_errors, decoded) = if erased {
                        (payload_bits, 0.0)
                    } else {
                        let ber = awgn_ber(mcs, cnr_db);
                        let success = (payload_bits as f64 * (-ber).ln_1p()).exp();
                        match options.mode {
                            SimMode::Mc => {
                                let errors = if ber > 0.0 {
                                    Binomial::new(payload_bits, ber).map(|b| b.sample(&mut rng)).unwrap_or(0)
                                } else {
                                    0
                                };
                                let u: f64 = rng.random();
                                (errors, if u < success { 1.0 } else { 0.0 })
                            }
                            SimMode::Expected => ((ber * payload_bits as f64).round() as u64, success),
                        }
                    };
                    SlotResult {
                        slot_index: options.first_slot_index + local,
                        t_start_ms,
                        erased,
                        payload_bits,
                        bit_errors,
                        cnr_db,
                        decoded,
                    }
                })
                .collect()
        })
        .collect();
    Ok(frames.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotMetrics {
    pub ber: f64,
    pub data_rate_mbps: f64,
    pub slot_loss_fraction: f64,
    pub total_slots: u64,
    pub erased_slots: u64,
}

/// Bit error rate, decoded throughput and erased-slot fraction over `elapsed_s`.
pub fn aggregate(results: &[SlotResult], elapsed_s: f64) -> Result<SlotMetrics, PhyError> {
    if results.is_empty() {
        return Err(PhyError::Empty);
    }
    let total_bits: u64 = results.iter().map(|r| r.payload_bits).sum();
    let errors: u64 = results.iter().map(|r| r.bit_errors).sum();
    let delivered: f64 = results.iter().filter(|r| !r.erased).map(|r| r.payload_bits as f64 * r.decoded).sum();
    let erased = results.iter().filter(|r| r.erased).count() as u64;
    Ok(SlotMetrics {
        ber: if total_bits > 0 { errors as f64 / total_bits as f64 } else { 0.0 },
        data_rate_mbps: delivered / elapsed_s / 1e6,
        slot_loss_fraction: erased as f64 / results.len() as f64,
        total_slots: results.len() as u64,
        erased_slots: erased,
    })
}

pub fn write_slots_csv<W: std::io::Write>(results: &[SlotResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["slot_index", "t_start_ms", "erased", "cnr_db", "payload_bits", "bit_errors", "decoded"])?;
    for r in results {
        w.write_record([
            r.slot_index.to_string(),
            r.t_start_ms.to_string(),
            (r.erased as u8).to_string(),
            r.cnr_db.to_string(),
            r.payload_bits.to_string(),
            r.bit_errors.to_string(),
            r.decoded.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
