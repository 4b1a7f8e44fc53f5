//! Finite length presentations of local cohomology and the Frobenius action
//! on them.
//!
//! cargo run --release --example local_cohomology

use fsing::finjective::{f_injective_on_hi, frobenius_action_matrix, lc_presentation};
use fsing::ringkit::{ParameterSystem, RingPresentation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in [2, 3] {
        let ring = RingPresentation::build(p, &["x", "y", "u", "v"], &[1; 4], &["x*u", "x*v", "y*u", "y*v"])?;
        let sop = ParameterSystem::certify(&ring, ring.parse_all(&["x + u", "y + v"])?)?;
        for i in 0..ring.dim() {
            let pres = lc_presentation(&ring, &sop, i)?;
            let matrix = frobenius_action_matrix(&ring, &pres)?;
            println!(
                "p = {p}  H^{i}: length {} profile {:?} rank {}  {}",
                pres.length(),
                pres.profile,
                matrix.rank(),
                f_injective_on_hi(&matrix).kind()
            );
        }
    }
    Ok(())
}
