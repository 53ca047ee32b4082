//! End-to-end scenario runs: orbit → link budget → blade blockage → frames.
//!
//! A run samples the flight in `windows` evenly spaced frame windows of
//! `n_frames` 10 ms frames each. All randomness derives from one root seed.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blades::{self, BladeError, BladeSample, BladeState, Interval};
use crate::link::{self, LinkError, LinkSample};
use crate::orbit::{self, AccessTimeline};
use crate::phy::{self, FrameSimOptions, PhyError, SimMode, SlotResult, FRAME_LENGTH_MS};
use crate::scenario::{self, ScenarioError, ScenarioSpec};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Blade(#[from] BladeError),
    #[error(transparent)]
    Phy(#[from] PhyError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("report schemas differ: {0}")]
    SchemaMismatch(String),
    #[error("scenario {scenario}: {source}")]
    InScenario { scenario: String, source: Box<RunError> },
}

impl RunError {
    /// Process exit status: 2 for configuration problems, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Scenario(_) | RunError::Config(_) | RunError::SchemaMismatch(_) => 2,
            RunError::InScenario { source, .. } => source.exit_code(),
            _ => 3,
        }
    }

    fn within(self, scenario: &str) -> RunError {
        match self {
            e @ RunError::InScenario { .. } => e,
            e => RunError::InScenario { scenario: scenario.to_string(), source: Box::new(e) },
        }
    }
}

/// Finds a built-in scenario by id, or loads a single-scenario file.
pub fn resolve_scenario(reference: &str) -> Result<ScenarioSpec, RunError> {
    if let Some(s) = scenario::builtin(reference) {
        return Ok(s);
    }
    let path = Path::new(reference);
    if path.exists() {
        return Ok(scenario::load_scenario(path)?);
    }
    Err(ScenarioError::UnresolvedReference(format!(
        "{reference:?} is neither a built-in scenario ({}) nor a file",
        scenario::builtin_ids().join(", ")
    ))
    .into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub step_s: f64,
    pub seed: u64,
    pub mode: SimMode,
    /// Frames per window.
    pub n_frames: u32,
    pub windows: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { step_s: 1.0, seed: 0, mode: SimMode::Mc, n_frames: 100, windows: 12 }
    }
}

/// Table-style summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario_id: String,
    pub seed: u64,
    pub mode: SimMode,
    pub step_s: f64,
    pub elevation_min_deg: f64,
    pub elevation_max_deg: f64,
    pub elevation_avg_deg: f64,
    /// Doppler magnitudes (kHz).
    pub doppler_min_khz: f64,
    pub doppler_max_khz: f64,
    pub doppler_avg_khz: f64,
    pub loss_avg_db: f64,
    pub fspl_avg_db: f64,
    pub cnr_min_db: f64,
    pub cnr_max_db: f64,
    pub cnr_avg_db: f64,
    pub reduced_bandwidth_mhz: Option<f64>,
    pub cnr_prime_min_db: Option<f64>,
    pub cnr_prime_max_db: Option<f64>,
    pub cnr_prime_avg_db: Option<f64>,
    pub access_pct: f64,
    pub handovers: u64,
    pub t_int_avg_ms: Option<f64>,
    pub t_lnk_avg_ms: Option<f64>,
    pub ber: f64,
    pub data_rate_mbps: f64,
    pub slot_loss_fraction: f64,
    pub total_slots: u64,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub report: RunReport,
    pub access: AccessTimeline,
    pub link: Vec<LinkSample>,
    pub slots: Vec<SlotResult>,
    pub blades: Vec<BladeSample>,
}

struct Stats {
    min: f64,
    max: f64,
    avg: f64,
}

fn stats(values: impl Iterator<Item = f64>) -> Stats {
    let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    for v in values {
        min = min.min(v);
        max = max.max(v);
        sum += v;
        n += 1;
    }
    if n == 0 {
        return Stats { min: f64::NAN, max: f64::NAN, avg: f64::NAN };
    }
    Stats { min, max, avg: sum / n as f64 }
}

/// Blade phase for a window: fixed, or drawn from the run seed.
fn blade_phase(spec: &ScenarioSpec, seed: u64, window: u32) -> f64 {
    if spec.phy.random_blade_phase {
        let mut rng = ChaCha8Rng::seed_from_u64(phy::derive_seed(seed, 1 << 40 | window as u64));
        rng.random::<f64>() * 1000.0
    } else {
        spec.phy.blade_phase_ms
    }
}

/// Runs the full pipeline in memory.
pub fn simulate(spec: &ScenarioSpec, options: &RunOptions) -> Result<RunArtifacts, RunError> {
    simulate_inner(spec, options).map_err(|e| e.within(&spec.id))
}

fn simulate_inner(spec: &ScenarioSpec, options: &RunOptions) -> Result<RunArtifacts, RunError> {
    if !(options.step_s > 0.0) {
        return Err(RunError::Config(format!("step must be > 0, got {}", options.step_s)));
    }
    if options.n_frames == 0 || options.windows == 0 {
        return Err(RunError::Config("frames and windows must be >= 1".into()));
    }
    let access = orbit::build_access_timeline(spec, options.step_s);
    let link = link::link_timeline(&access.samples, spec)?;
    let channel = spec.channel()?;

    let span_ms = options.n_frames as f64 * FRAME_LENGTH_MS;
    let duration_s = spec.duration_s();
    let slots_per_window = options.n_frames as u64 * channel.numerology.slots_per_frame as u64;
    let mut slots = Vec::new();
    let mut blade_rows = Vec::new();
    for w in 0..options.windows {
        let start_s = ((w as f64 + 0.5) * duration_s / options.windows as f64).min((duration_s - span_ms / 1000.0).max(0.0));
        let erasures: Vec<Interval> = match &spec.aircraft.rotor {
            Some(rotor) => {
                let (iv, rows) =
                    blades::blocked_intervals(rotor, &access.samples, start_s, span_ms, blade_phase(spec, options.seed, w))?;
                blade_rows.extend(rows);
                iv
            }
            None => Vec::new(),
        };
        let sim = FrameSimOptions {
            n_frames: options.n_frames,
            seed: phy::derive_seed(options.seed, w as u64),
            mode: options.mode,
            overlap_rule: spec.phy.overlap_rule,
            start_time_s: start_s,
            first_slot_index: w as u64 * slots_per_window,
            n_rb: spec.phy.n_rb,
            overhead_fraction: spec.phy.overhead_fraction,
        };
        slots.extend(phy::simulate_frames(&link, &erasures, &channel, &spec.phy.mcs, &sim)?);
    }

    let report = build_report(spec, options, &access, &link, &slots, &blade_rows, channel.numerology.slot_length_ms)?;
    Ok(RunArtifacts { report, access, link, slots, blades: blade_rows })
}

fn build_report(
    spec: &ScenarioSpec,
    options: &RunOptions,
    access: &AccessTimeline,
    link: &[LinkSample],
    slots: &[SlotResult],
    blade_rows: &[BladeSample],
    slot_length_ms: f64,
) -> Result<RunReport, RunError> {
    let served: Vec<_> = access.samples.iter().filter_map(|s| s.view.zip(s.doppler_khz)).collect();
    let elevation = stats(served.iter().map(|(v, _)| v.elevation_deg));
    let doppler = stats(served.iter().map(|(_, d)| d.abs()));
    let losses: Vec<_> = link.iter().filter_map(|l| l.loss).collect();
    let loss = stats(losses.iter().map(|l| l.total_db));
    let fspl = stats(losses.iter().map(|l| l.fspl_db));
    let cnrs: Vec<f64> = link.iter().filter(|l| !l.is_outage()).map(|l| l.cnr_db).collect();
    let cnr = stats(cnrs.iter().copied());
    let prime = match spec.reduced_bandwidth_mhz {
        Some(reduced) => {
            let bw = spec.antenna().map_or(reduced, |a| a.bandwidth_mhz);
            let mut values = Vec::with_capacity(cnrs.len());
            for c in &cnrs {
                values.push(link::rescale_cnr(*c, bw, reduced)?);
            }
            Some(stats(values.into_iter()))
        }
        None => None,
    };
    let periodic: Vec<_> = blade_rows.iter().filter(|b| b.t_lnk_ms.is_some() && b.t_int_ms.is_finite()).collect();
    let t_int = (!periodic.is_empty()).then(|| stats(periodic.iter().map(|b| b.t_int_ms)).avg);
    let t_lnk = (!periodic.is_empty()).then(|| stats(periodic.iter().filter_map(|b| b.t_lnk_ms)).avg);

    let elapsed_s = slots.len() as f64 * slot_length_ms / 1000.0;
    let metrics = phy::aggregate(slots, elapsed_s)?;

    Ok(RunReport {
        scenario_id: spec.id.clone(),
        seed: options.seed,
        mode: options.mode,
        step_s: options.step_s,
        elevation_min_deg: elevation.min,
        elevation_max_deg: elevation.max,
        elevation_avg_deg: elevation.avg,
        doppler_min_khz: doppler.min,
        doppler_max_khz: doppler.max,
        doppler_avg_khz: doppler.avg,
        loss_avg_db: loss.avg,
        fspl_avg_db: fspl.avg,
        cnr_min_db: cnr.min,
        cnr_max_db: cnr.max,
        cnr_avg_db: cnr.avg,
        reduced_bandwidth_mhz: spec.reduced_bandwidth_mhz,
        cnr_prime_min_db: prime.as_ref().map(|s| s.min),
        cnr_prime_max_db: prime.as_ref().map(|s| s.max),
        cnr_prime_avg_db: prime.as_ref().map(|s| s.avg),
        access_pct: access.access_percentage(),
        handovers: access.handovers.len() as u64,
        t_int_avg_ms: t_int,
        t_lnk_avg_ms: t_lnk,
        ber: metrics.ber,
        data_rate_mbps: metrics.data_rate_mbps,
        slot_loss_fraction: metrics.slot_loss_fraction,
        total_slots: metrics.total_slots,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| RunError::Io { path: path.display().to_string(), source })
}

/// Writes `<out>/<scenario_id>/{access,link,slots}.csv`, `blades.csv` for
/// rotor aircraft, and `report.json`. Returns the scenario directory.
pub fn write_artifacts(artifacts: &RunArtifacts, out_dir: &Path) -> Result<PathBuf, RunError> {
    let dir = out_dir.join(&artifacts.report.scenario_id);
    std::fs::create_dir_all(&dir).map_err(|source| RunError::Io { path: dir.display().to_string(), source })?;
    orbit::write_access_csv(&artifacts.access, create(&dir.join("access.csv"))?)?;
    link::write_link_csv(&artifacts.link, create(&dir.join("link.csv"))?)?;
    phy::write_slots_csv(&artifacts.slots, create(&dir.join("slots.csv"))?)?;
    if !artifacts.blades.is_empty() {
        blades::write_blade_csv(&artifacts.blades, create(&dir.join("blades.csv"))?)?;
    }
    let json = serde_json::to_string_pretty(&artifacts.report)?;
    let path = dir.join("report.json");
    std::fs::write(&path, json + "\n").map_err(|source| RunError::Io { path: path.display().to_string(), source })?;
    Ok(dir)
}

/// Simulates a scenario and, when `out_dir` is given, writes its artifacts.
pub fn run(spec: &ScenarioSpec, options: &RunOptions, out_dir: Option<&Path>) -> Result<RunArtifacts, RunError> {
    let artifacts = simulate(spec, options)?;
    if let Some(dir) = out_dir {
        write_artifacts(&artifacts, dir).map_err(|e| e.within(&spec.id))?;
    }
    Ok(artifacts)
}

// ============================================================================
// CNR sweep
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub cnr_db: f64,
    pub ber: f64,
    pub data_rate_mbps: f64,
    pub slot_loss_fraction: f64,
}

/// Evenly spaced CNR grid, endpoints included.
pub fn cnr_grid(min_db: f64, max_db: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![min_db],
        n => (0..n).map(|i| min_db + (max_db - min_db) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Blade state at the flight-average serving elevation.
pub fn average_blade_state(spec: &ScenarioSpec, access: &AccessTimeline) -> Result<Option<BladeState>, RunError> {
    let Some(rotor) = &spec.aircraft.rotor else { return Ok(None) };
    let views: Vec<_> = access.samples.iter().filter_map(|s| s.view).collect();
    if views.is_empty() {
        return Ok(None);
    }
    let mean = views.iter().map(|v| v.elevation_deg).sum::<f64>() / views.len() as f64;
    let nearest = views
        .iter()
        .min_by(|a, b| (a.elevation_deg - mean).abs().total_cmp(&(b.elevation_deg - mean).abs()))
        .expect("non-empty");
    Ok(Some(blades::blade_state(rotor, mean, nearest.azimuth_deg)?))
}

/// BER / data-rate curve at fixed CNR (over the PHY channel bandwidth) with
/// the scenario's blade schedule at its average elevation.
pub fn sweep(
    spec: &ScenarioSpec,
    grid: &[f64],
    n_frames: u32,
    seed: u64,
    mode: SimMode,
    step_s: f64,
) -> Result<Vec<SweepPoint>, RunError> {
    if grid.is_empty() {
        return Err(RunError::Config("empty CNR grid".into()).within(&spec.id));
    }
    if n_frames == 0 {
        return Err(RunError::Config("frames must be >= 1".into()).within(&spec.id));
    }
    let inner = || -> Result<Vec<SweepPoint>, RunError> {
        let channel = spec.channel()?;
        let span_ms = n_frames as f64 * FRAME_LENGTH_MS;
        let erasures = match spec.aircraft.rotor {
            Some(_) => {
                let access = orbit::build_access_timeline(spec, step_s);
                match average_blade_state(spec, &access)? {
                    Some(BladeState::Periodic(s, _)) => blades::erasure_schedule(&s, span_ms, spec.phy.blade_phase_ms),
                    Some(BladeState::Blocked) => vec![Interval { start_ms: 0.0, stop_ms: span_ms }],
                    _ => Vec::new(),
                }
            }
            None => Vec::new(),
        };
        let elapsed_s = span_ms / 1000.0;
        grid.iter()
            .enumerate()
            .map(|(i, &cnr_db)| {
                let link = [LinkSample {
                    time_s: 0.0,
                    loss: None,
                    tx_gain_dbi: f64::NAN,
                    rx_gain_over_t_dbk: f64::NAN,
                    cnr_db,
                    bandwidth_mhz: channel.bandwidth_mhz,
                    doppler_khz: None,
                    elevation_deg: None,
                }];
                let opts = FrameSimOptions {
                    n_frames,
                    seed: phy::derive_seed(seed, i as u64),
                    mode,
                    overlap_rule: spec.phy.overlap_rule,
                    start_time_s: 0.0,
                    first_slot_index: 0,
                    n_rb: spec.phy.n_rb,
                    overhead_fraction: spec.phy.overhead_fraction,
                };
                let slots = phy::simulate_frames(&link, &erasures, &channel, &spec.phy.mcs, &opts)?;
                let m = phy::aggregate(&slots, elapsed_s)?;
                Ok(SweepPoint { cnr_db, ber: m.ber, data_rate_mbps: m.data_rate_mbps, slot_loss_fraction: m.slot_loss_fraction })
            })
            .collect()
    };
    inner().map_err(|e| e.within(&spec.id))
}

pub fn write_sweep_csv<W: std::io::Write>(points: &[SweepPoint], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["cnr_db", "ber", "data_rate_mbps"])?;
    for p in points {
        w.write_record([p.cnr_db.to_string(), p.ber.to_string(), p.data_rate_mbps.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

// ============================================================================
// Report comparison
// ============================================================================

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDelta {
    pub field: String,
    pub a: serde_json::Value,
    pub b: serde_json::Value,
    /// b − a for numeric fields present in both reports.
    pub delta: Option<f64>,
}

/// Field-by-field differences between two report objects with identical keys.
pub fn compare_json(a: &serde_json::Value, b: &serde_json::Value) -> Result<Vec<FieldDelta>, RunError> {
    let (Some(oa), Some(ob)) = (a.as_object(), b.as_object()) else {
        return Err(RunError::SchemaMismatch("reports must be JSON objects".into()));
    };
    let ka: Vec<_> = oa.keys().collect();
    let kb: Vec<_> = ob.keys().collect();
    if ka != kb {
        let only_a: Vec<_> = ka.iter().filter(|k| !ob.contains_key(k.as_str())).collect();
        let only_b: Vec<_> = kb.iter().filter(|k| !oa.contains_key(k.as_str())).collect();
        return Err(RunError::SchemaMismatch(format!("only in a: {only_a:?}; only in b: {only_b:?}")));
    }
    Ok(oa
        .iter()
        .map(|(k, va)| {
            let vb = &ob[k];
            let delta = va.as_f64().zip(vb.as_f64()).map(|(x, y)| y - x);
            FieldDelta { field: k.clone(), a: va.clone(), b: vb.clone(), delta }
        })
        .collect())
}

pub fn compare(a: &RunReport, b: &RunReport) -> Result<Vec<FieldDelta>, RunError> {
    compare_json(&serde_json::to_value(a)?, &serde_json::to_value(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        assert_eq!(cnr_grid(0.0, 10.0, 3), vec![0.0, 5.0, 10.0]);
        assert!(cnr_grid(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn compare_detects_schema_mismatch() {
        let a = serde_json::json!({"x": 1.0, "y": 2.0});
        let b = serde_json::json!({"x": 1.0});
        assert!(matches!(compare_json(&a, &b), Err(RunError::SchemaMismatch(_))));
        let d = compare_json(&a, &a).unwrap();
        assert!(d.iter().all(|f| f.delta == Some(0.0)));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(resolve_scenario("no-such-scenario").unwrap_err().exit_code(), 2);
        let e = RunError::Phy(PhyError::Empty).within("s");
        assert_eq!(e.exit_code(), 3);
    }
}
