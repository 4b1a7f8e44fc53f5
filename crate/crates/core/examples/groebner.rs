//! Gröbner basis, normal forms and Hilbert data of a small graded ideal.
//!
//! cargo run --release --example groebner

use fsing::kernel::{parse_polynomial, FieldSpec, IdealHandle, MonomialOrder, PolyRing};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = PolyRing::new(
        FieldSpec::new(7)?,
        vec!["x".into(), "y".into(), "z".into()],
        vec![1, 1, 1],
        MonomialOrder::WeightedGrevlex,
    )?;
    let gens = ["x^2 - y*z", "x*y - z^2", "y^2 - x*z"]
        .iter()
        .map(|s| parse_polynomial(&ring, s))
        .collect::<Result<Vec<_>, _>>()?;
    let ideal = IdealHandle::new(&ring, gens);

    println!("reduced Gröbner basis:");
    for g in ideal.gb()? {
        println!("  {g}");
    }
    let f = parse_polynomial(&ring, "x^3 + y^3 + z^3")?;
    println!("NF({f}) = {}", ideal.normal_form(&f)?);
    println!("Krull dimension {}", ideal.krull_dimension()?);
    println!("Hilbert numerator {:?}", ideal.hilbert_numerator()?.0);
    for d in 0..4 {
        println!("  dim R_{d} = {}", ideal.graded_piece_basis(d)?.len());
    }
    Ok(())
}
