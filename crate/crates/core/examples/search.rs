//! Seeded random rings from a generator family, classified in order.
//!
//! cargo run --release --example search -- binomial 5

use fsing::corpus::{Family, RingGenerator};
use fsing::finjective::{classify, ClassifyBudget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let family: Family = args.next().unwrap_or_else(|| "binomial".into()).parse()?;
    let count: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let generator = RingGenerator::new(family, 0);
    for (k, (spec, ring)) in generator.generate(count).enumerate() {
        let report = classify(&ring, &ClassifyBudget::default());
        println!(
            "{k:>3} p={} gens={:?}  cm={} flc={} f_inj={}",
            spec.p,
            spec.gens,
            report.cohen_macaulay.kind(),
            report.flc.kind(),
            report.f_injective.kind()
        );
    }
    Ok(())
}
