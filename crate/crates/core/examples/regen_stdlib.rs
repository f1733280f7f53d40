//! Rewrites `stdlib/*.l` from the generators.

use std::path::Path;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../stdlib");
    for (file, source) in tvl::stdlib::gen::generated() {
        std::fs::write(dir.join(file), format!("{}\n", source.trim_end()))?;
        println!("{file}: {} bytes", source.len());
    }
    Ok(())
}
