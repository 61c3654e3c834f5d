// Regenerates the bundled synthetic corpora under `data/`.
//
// ```text
// cargo run --example write_bundle [DIR]
// ```

use std::path::PathBuf;

use emogru::synthetic::{write_bundle, BUNDLE_SEED};

fn main() -> emogru::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    write_bundle(&dir, BUNDLE_SEED)?;
    println!("wrote {}", dir.display());
    Ok(())
}
