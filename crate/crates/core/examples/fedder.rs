//! F-purity of the Fermat cubic over several primes.
//!
//! cargo run --release --example fedder

use fsing::frobenius::fedder_f_pure;
use fsing::ringkit::RingPresentation;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in [2, 3, 5, 7, 11, 13] {
        let ring = RingPresentation::build(p, &["x", "y", "z"], &[1, 1, 1], &["x^3 + y^3 + z^3"])?;
        let v = fedder_f_pure(&ring)?;
        println!("p = {p:>2}  p mod 3 = {}  {}", p % 3, v.kind());
    }
    Ok(())
}
