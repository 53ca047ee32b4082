//! Writes every built-in scenario as a standalone JSON file.
//!
//! ```text
//! cargo run --example export_builtins -- crates/core/data/scenarios
//! ```

use std::path::PathBuf;

use rwa_ntn::scenario::{builtin_file_for, builtin_ids};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/scenarios"));
    std::fs::create_dir_all(&dir)?;
    for id in builtin_ids() {
        let file = builtin_file_for(&id).expect("listed id");
        let path = dir.join(format!("{id}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&file)? + "\n")?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
