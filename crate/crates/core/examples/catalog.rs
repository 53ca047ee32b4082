//! Lists the built-in scenarios with their link setup.
//!
//! ```text
//! cargo run --example catalog
//! ```

use rwa_ntn::scenario::builtin_catalog;

fn main() {
    println!("{:<13} {:<6} {:<6} {:<9} {:>8} {:>6} {:>7}  channel", "id", "rwa", "const", "link", "f (GHz)", "dur h", "mask");
    for s in builtin_catalog() {
        let channel = s.channel().expect("built-ins validate");
        println!(
            "{:<13} {:<6} {:<6} {:<9} {:>8.3} {:>6.2} {:>6.1}°  {} MHz @ {} kHz, {} RB {} r={}",
            s.id,
            s.aircraft.name,
            s.constellation.name,
            format!("{:?}/{:?}", s.link_direction, s.band),
            s.carrier_ghz,
            s.duration_h,
            s.handover_threshold_deg,
            channel.bandwidth_mhz,
            channel.numerology.scs_khz,
            s.phy.n_rb,
            s.phy.mcs.modulation,
            s.phy.mcs.code_rate,
        );
    }
}
