//! Full pipeline run of a built-in scenario, writing CSVs and report.json.
//!
//! ```text
//! cargo run --release --example run_scenario -- scenario-7 out
//! ```

use std::path::PathBuf;

use rwa_ntn::runner::{self, RunOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "scenario-7".into());
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));

    let result = runner::resolve_scenario(&id).and_then(|spec| runner::run(&spec, &RunOptions { seed: 42, ..Default::default() }, Some(&out)));
    match result {
        Ok(artifacts) => {
            let r = &artifacts.report;
            println!("{} -> {}", r.scenario_id, out.join(&r.scenario_id).display());
            println!("  elevation [{:.1}, {:.1}] avg {:.1}°", r.elevation_min_deg, r.elevation_max_deg, r.elevation_avg_deg);
            println!("  |Doppler| [{:.1}, {:.1}] avg {:.1} kHz", r.doppler_min_khz, r.doppler_max_khz, r.doppler_avg_khz);
            println!("  loss avg {:.1} dB, CNR [{:.1}, {:.1}] avg {:.1} dB", r.loss_avg_db, r.cnr_min_db, r.cnr_max_db, r.cnr_avg_db);
            if let Some(avg) = r.cnr_prime_avg_db {
                println!("  CNR' over {} MHz avg {avg:.1} dB", r.reduced_bandwidth_mhz.unwrap_or_default());
            }
            println!("  access {:.2}%, BER {:.4}, {:.2} Mbit/s, slot loss {:.3}", r.access_pct, r.ber, r.data_rate_mbps, r.slot_loss_fraction);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
