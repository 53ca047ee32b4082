//! Frame-level PHY: transport block size, analytic BER, and a blade-erased
//! Monte-Carlo run next to its expected-value counterpart.
//!
//! ```text
//! cargo run --release --example frame_sim
//! ```

use rwa_ntn::blades::{self, BladeSchedule};
use rwa_ntn::link::LinkSample;
use rwa_ntn::phy::{self, Direction, FrameSimOptions, McsConfig, Modulation, NtnBand, NtnBandName, SimMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let channel = phy::validate_channel(&NtnBand::get(NtnBandName::N256), Direction::Uplink, 1.995, 5.0, 30)?;
    let mcs = McsConfig::new(Modulation::Qpsk, 0.5, 6.0)?;
    let tbs = phy::transport_block_size(11, &channel.numerology, &mcs, 0.0)?;
    println!("n256 5 MHz, 30 kHz SCS, 11 RB QPSK 1/2: {tbs} bits per slot");
    for cnr in [-6.0, -3.0, 0.0, 3.0] {
        println!("  CNR {cnr:>5.1} dB -> coded BER {:.3e}", phy::awgn_ber(&mcs, cnr));
    }

    let sched = BladeSchedule {
        n_blades: 3,
        t_int_ms: 1.6,
        t_lnk_ms: 13.9,
        rotation_time_ms: 46.5,
        total_link_time_ms: 41.7,
        rate_deg_per_ms: 360.0 / 46.5,
    };
    let span_ms = 100.0 * phy::FRAME_LENGTH_MS;
    let erasures = blades::erasure_schedule(&sched, span_ms, 0.0);
    let link = [LinkSample {
        time_s: 0.0,
        loss: None,
        tx_gain_dbi: 0.0,
        rx_gain_over_t_dbk: 0.0,
        cnr_db: 1.1,
        bandwidth_mhz: 5.0,
        doppler_khz: None,
        elevation_deg: None,
    }];
    for mode in [SimMode::Mc, SimMode::Expected] {
        let opts = FrameSimOptions { n_frames: 100, seed: 7, mode, ..Default::default() };
        let slots = phy::simulate_frames(&link, &erasures, &channel, &mcs, &opts)?;
        let m = phy::aggregate(&slots, span_ms / 1000.0)?;
        println!(
            "{mode:?}: {} slots, {} erased ({:.3}), BER {:.4}, {:.3} Mbit/s",
            m.total_slots, m.erased_slots, m.slot_loss_fraction, m.ber, m.data_rate_mbps
        );
    }
    Ok(())
}
