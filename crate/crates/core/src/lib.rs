//! Exact computations around Eisenstein series with character and the
//! congruences they satisfy modulo primes.

pub mod bernoulli;
pub mod criteria;
pub mod cyclotomic;
pub mod dirichlet;
pub mod eisenstein;
pub mod error;
pub mod ntheory;
pub mod oracle;
pub mod reduction;

pub use cyclotomic::{ComplexApprox, CyclotomicNumber, Rational};
pub use dirichlet::DirichletCharacter;
pub use error::{Error, Result};
