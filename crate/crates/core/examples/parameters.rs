//! Systems of parameters, d-sequences, multiplicities and the Buchsbaum
//! constant on the union of two planes meeting in a point.
//!
//! cargo run --release --example parameters

use fsing::parameters::{buchsbaum_constant, buchsbaum_verdict, delta_sample, flc_evidence, is_d_sequence, DEFAULT_N_SCHEDULE};
use fsing::ringkit::{ParameterSystem, RingPresentation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = RingPresentation::build(2, &["x", "y", "u", "v"], &[1; 4], &["x*u", "x*v", "y*u", "y*v"])?;
    let sop = ParameterSystem::certify(&ring, ring.parse_all(&["x + u", "y + v"])?)?;
    println!("sop {:?}", sop.to_strings());
    println!("multiplicity {}", ring.multiplicity(&sop)?);
    println!("by differences {:?}", ring.multiplicity_by_differences(&sop, 12)?);
    let d = delta_sample(&ring, &sop)?;
    println!("length {} multiplicity {} delta {}", d.length, d.multiplicity, d.delta);
    println!("Cohen-Macaulay: {}", ring.is_cohen_macaulay(&sop)?.kind());
    println!("d-sequence: {}", is_d_sequence(&sop)?.pass);
    println!("finite local cohomology (N = 2): {}", flc_evidence(&ring, 4, 2, 0)?.kind());
    println!("Buchsbaum: {}", buchsbaum_verdict(&ring, 4, 0)?.verdict.kind());
    let c = buchsbaum_constant(&ring, &DEFAULT_N_SCHEDULE, 3, 0)?;
    println!("constant {:?} levels {:?}", c.constant, c.levels);
    Ok(())
}
