//! Finite computations around Frobenius closure, F-purity, F-injectivity and
//! Buchsbaumness of graded quotient rings `F_p[x_1..x_m]/J`.

pub mod kernel;
pub mod ringkit;
pub mod verdict;
pub mod frobenius;
pub mod parameters;
pub mod finjective;
pub mod corpus;
pub mod cli;
