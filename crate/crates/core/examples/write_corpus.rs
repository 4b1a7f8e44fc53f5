//! Writes every built-in fixture as a ring file.
//!
//! cargo run --release --example write_corpus -- corpus

use fsing::cli::print_ring_file;
use fsing::corpus::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "corpus".to_string());
    std::fs::create_dir_all(&dir)?;
    for f in fixtures() {
        let ring = f.build()?;
        let path = std::path::Path::new(&dir).join(format!("{}.ring", f.name));
        let header: String = f
            .expected
            .iter()
            .map(|e| format!("# expect {:?}  ({})\n", e.expect, e.oracle))
            .collect();
        std::fs::write(&path, format!("# {}\n{header}{}", f.name, print_ring_file(&ring)))?;
        println!("{}", path.display());
    }
    Ok(())
}
