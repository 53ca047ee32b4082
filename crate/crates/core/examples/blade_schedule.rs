//! Rotor-blade interference: t_int against elevation, the slot erasure
//! pattern, and the effect of rotor speed.
//!
//! ```text
//! cargo run --example blade_schedule
//! ```

use rwa_ntn::blades::{self, BladeState};
use rwa_ntn::phy::numerology_for;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let uav = rwa_ntn::builtin("scenario-7").expect("built-in").aircraft;
    let rotor = uav.rotor.expect("UAV-2 has a rotor");
    println!("{} rotor: {} blades at {} rpm, T_rot {:.2} ms", uav.name, rotor.n_blades, rotor.rotor_rpm, rotor.rotation_time_ms());

    println!("{:>7} {:>10} {:>8} {:>9} {:>9} {:>6}", "el (°)", "D_rotor m", "φ (°)", "t_int ms", "t_lnk ms", "duty");
    for el in [20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0] {
        match blades::blade_state(&rotor, el, 0.0)? {
            BladeState::Periodic(s, g) => println!(
                "{el:>7.1} {:>10.3} {:>8.2} {:>9.3} {:>9.3} {:>6.3}",
                g.d_rotor_m, g.phi_deg, s.t_int_ms, s.t_lnk_ms, s.duty_cycle()
            ),
            other => println!("{el:>7.1} {other:?}"),
        }
    }

    // erasure pattern over one blade period at 30 kHz SCS
    let d = blades::interference_point(&rotor, 58.3)?.expect("inside the disc");
    let geometry = blades::geometry(&rotor, d)?;
    let sched = blades::schedule(&rotor, &geometry)?;
    let slot = numerology_for(30)?.slot_length_ms;
    let pattern: String = (0..((sched.period_ms() / slot).round() as usize * 2))
        .map(|k| {
            let (a, b) = (k as f64 * slot, (k + 1) as f64 * slot);
            let blocked: f64 = blades::erasure_schedule(&sched, 2.0 * sched.period_ms() + slot, 0.0)
                .iter()
                .map(|iv| (iv.stop_ms.min(b) - iv.start_ms.max(a)).max(0.0))
                .sum();
            if blocked > slot / 2.0 { 'x' } else { '.' }
        })
        .collect();
    println!("58.3°: t_int {:.2} ms, t_lnk {:.2} ms, slots: {pattern}", sched.t_int_ms, sched.t_lnk_ms);

    // a slower rotor at the same geometry
    let mut slow = rotor.clone();
    slow.rotor_rpm /= 3.2;
    let cmp = blades::speed_comparison(&slow, &rotor, &geometry)?;
    println!("rpm / 3.2: t_int x{:.2}, T_rot x{:.2}, t_lnk x{:.2}", cmp.t_int_ratio, cmp.rotation_time_ratio, cmp.t_lnk_ratio);
    Ok(())
}
