//! Exact arithmetic for Eisenstein newforms: Dirichlet characters,
//! cyclotomic coefficients, signed divisor sums, sign statistics,
//! multiplicity-one analysis and decomposition of Eisenstein spaces.

pub mod bernoulli;
pub mod chars;
pub mod decimal;
pub mod decomp;
pub mod cyclo;
pub mod eisen;
pub mod kronecker;
pub mod linalg;
pub mod multone;
pub mod stats;
