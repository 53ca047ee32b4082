//! BER and data-rate curve over CNR for a scenario's PHY and blade schedule.
//!
//! ```text
//! cargo run --release --example sweep -- scenario-7
//! ```

use rwa_ntn::phy::SimMode;
use rwa_ntn::runner;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "scenario-7".into());
    let spec = runner::resolve_scenario(&id)?;
    let grid = runner::cnr_grid(-8.0, 8.0, 9);
    let mc = runner::sweep(&spec, &grid, 50, 1, SimMode::Mc, 5.0)?;
    let ex = runner::sweep(&spec, &grid, 50, 1, SimMode::Expected, 5.0)?;
    println!("{:>8} {:>12} {:>12} {:>10}", "CNR dB", "BER (MC)", "BER (exp)", "Mbit/s");
    for (m, e) in mc.iter().zip(&ex) {
        println!("{:>8.1} {:>12.4e} {:>12.4e} {:>10.3}", m.cnr_db, m.ber, e.ber, m.data_rate_mbps);
    }
    Ok(())
}
