//! Frobenius closure chains of parameter ideals.
//!
//! cargo run --release --example closure

use fsing::frobenius::frobenius_closure;
use fsing::ringkit::RingPresentation;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // F_2[x, y] / (y^2 + x^3) with deg x = 2, deg y = 3
    let cusp = RingPresentation::build(2, &["x", "y"], &[2, 3], &["y^2 + x^3"])?;
    for gens in [vec!["x"], vec!["y"], vec!["x^2"]] {
        let ideal = cusp.ideal(&cusp.parse_all(&gens)?);
        let out = frobenius_closure(&cusp, &ideal, 3)?;
        print!("I = ({})  ", gens.join(", "));
        match out.witness() {
            Some((w, e)) => println!("not closed: {w} enters at level {e}"),
            None => println!("closed through level {}", out.chain.len() - 1),
        }
    }
    Ok(())
}
