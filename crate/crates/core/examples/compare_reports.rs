//! Field-by-field comparison of two scenario reports (LEO vs GEO from the
//! same helicopter).
//!
//! ```text
//! cargo run --release --example compare_reports
//! ```

use rwa_ntn::runner::{self, RunOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let options = RunOptions { step_s: 5.0, n_frames: 20, ..Default::default() };
    let a = runner::simulate(&runner::resolve_scenario("scenario-15a")?, &options)?.report;
    let b = runner::simulate(&runner::resolve_scenario("scenario-15b")?, &options)?.report;
    for d in runner::compare(&a, &b)? {
        match d.delta {
            Some(delta) => println!("{:<24} {:>12} {:>12} {:>+10.3}", d.field, d.a.to_string(), d.b.to_string(), delta),
            None => println!("{:<24} {:>12} {:>12}", d.field, d.a.to_string(), d.b.to_string()),
        }
    }
    Ok(())
}
