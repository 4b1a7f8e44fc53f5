//! Exact polynomial arithmetic over F_p and the ideal operations built on
//! Gröbner bases.

pub mod field;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;

pub use field::FieldSpec;
pub use groebner::{groebner_basis, groebner_basis_within, is_groebner_basis, reduce};
pub use hilbert::IntPoly;
pub use ideal::IdealHandle;
pub use monomial::{Exponents, Monomial, MonomialOrder};
pub use parse::{parse_polynomial, ParseError};
pub use poly::{PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("p not prime: {0}")]
    NotPrime(u64),
    #[error("{q} is not a power of p = {p}")]
    NotPPower { q: u64, p: u32 },
    #[error("polynomials or ideals from different rings")]
    RingMismatch,
    #[error("generator {generator} is not quasi-homogeneous (term degrees {degrees:?})")]
    Inhomogeneous { generator: String, degrees: Vec<u32> },
    #[error("{0}")]
    Argument(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
}
