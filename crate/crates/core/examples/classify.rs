//! Full classification of a built-in fixture, checked against its expected
//! values.
//!
//! cargo run --release --example classify -- two-planes

use fsing::corpus::{fixture, fixtures};
use fsing::finjective::{classify, ClassifyBudget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "two-planes".to_string());
    let Some(f) = fixture(&name) else {
        let names: Vec<_> = fixtures().iter().map(|f| f.name).collect();
        return Err(format!("unknown fixture {name}; known: {}", names.join(", ")).into());
    };
    let ring = f.build()?;
    let report = classify(&ring, &ClassifyBudget::default());
    println!("reduced          {}", report.reduced.kind());
    println!("F-pure           {}", report.f_pure.kind());
    println!("Cohen-Macaulay   {}", report.cohen_macaulay.kind());
    println!("FLC              {}", report.flc.kind());
    println!("Buchsbaum        {}", report.buchsbaum_verdict().kind());
    println!("F-injective      {}", report.f_injective.kind());
    println!("l - e values     {:?}", report.delta_values());
    for c in &report.contradictions {
        println!("contradiction {}: {}", c.rule, c.detail);
    }
    let mismatches = f.check(&report);
    if mismatches.is_empty() {
        println!("all {} expectations hold", f.expected.len());
    } else {
        for m in &mismatches {
            println!("mismatch: {m}");
        }
    }
    Ok(())
}
