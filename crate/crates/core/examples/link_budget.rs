//! Link budget for a single geometry, then the scenario-wide CNR statistics.
//!
//! ```text
//! cargo run --release --example link_budget
//! ```

use rwa_ntn::link::{self, LossModel};
use rwa_ntn::orbit;
use rwa_ntn::scenario::Band;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Ka uplink to a LEO satellite at 40° in 25 mm/h rain
    let model = LossModel::default();
    let distance_km = 1600.0;
    let f_ghz = 29.5;
    let fspl = link::fspl(distance_km, f_ghz)?;
    let atm = link::atmospheric_loss(40.0, f_ghz, 25.0, &model)?;
    let total = fspl + atm.gaseous_db + atm.rain_db + atm.cloud_db;
    println!("FSPL {fspl:.2} dB, gas {:.2}, rain {:.2}, cloud {:.2} -> total {total:.2} dB", atm.gaseous_db, atm.rain_db, atm.cloud_db);
    println!("zenith figures for Ka: {:?}", model.zenith(Band::Ka));

    let eirp = 10.0 + 36.26;
    let cnr = link::compute_cnr(eirp, 5.0, total, 0.0, 400.0);
    let cnr_200 = link::rescale_cnr(cnr, 400.0, 200.0)?;
    println!("CNR over 400 MHz {cnr:.2} dB, over 200 MHz {cnr_200:.2} dB");

    // whole flight
    let spec = rwa_ntn::builtin("scenario-15b").expect("built-in");
    let access = orbit::build_access_timeline(&spec, 5.0);
    let samples = link::link_timeline(&access.samples, &spec)?;
    let served: Vec<_> = samples.iter().filter(|s| !s.is_outage()).collect();
    let avg = |f: &dyn Fn(&link::LinkSample) -> f64| served.iter().map(|s| f(s)).sum::<f64>() / served.len() as f64;
    println!(
        "{}: average loss {:.1} dB (FSPL {:.1}), average CNR {:.1} dB over {} samples",
        spec.id,
        avg(&|s| s.loss.map_or(f64::NAN, |l| l.total_db)),
        avg(&|s| s.loss.map_or(f64::NAN, |l| l.fspl_db)),
        avg(&|s| s.cnr_db),
        served.len()
    );
    Ok(())
}
