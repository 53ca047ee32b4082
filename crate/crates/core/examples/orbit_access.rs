//! Serving-satellite timeline for one scenario: elevation, Doppler and handovers.
//!
//! ```text
//! cargo run --release --example orbit_access -- scenario-6
//! ```

use rwa_ntn::orbit::{self, KeplerianElements};

fn main() {
    let id = std::env::args().nth(1).unwrap_or_else(|| "scenario-6".into());
    let spec = rwa_ntn::builtin(&id).unwrap_or_else(|| panic!("unknown scenario {id}"));

    let c = &spec.constellation;
    let el = KeplerianElements::circular(c.altitude_km, c.inclination_of(0), c.raan_of(0), 0.0);
    println!("{}: {} satellites, period {:.1} min, speed {:.3} km/s", c.name, c.total_satellites(), el.period_s() / 60.0, el.circular_speed());

    let timeline = orbit::build_access_timeline(&spec, 1.0);
    println!("access {:.2}% with {} handovers over {} h", timeline.access_percentage(), timeline.handovers.len(), spec.duration_h);

    println!("{:>8} {:>5} {:>8} {:>8} {:>10} {:>10}", "t (s)", "sat", "el (°)", "az (°)", "range (km)", "f_d (kHz)");
    let every = (timeline.samples.len() / 20).max(1);
    for s in timeline.samples.iter().step_by(every) {
        match (s.satellite_id, s.view, s.doppler_khz) {
            (Some(sat), Some(v), Some(d)) => println!(
                "{:>8.0} {:>5} {:>8.2} {:>8.2} {:>10.1} {:>10.2}",
                s.time_s, sat, v.elevation_deg, v.azimuth_deg, v.slant_range_km, d
            ),
            _ => println!("{:>8.0} outage", s.time_s),
        }
    }
}
