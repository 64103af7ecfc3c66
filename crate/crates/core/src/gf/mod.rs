//! Exact arithmetic: prime fields, rationals and dense matrices over them.

mod field;
mod matrix;

pub use field::{field_inverse, is_prime, Field, Fp, PrimeField, SUPPORTED_PRIMES};
pub use matrix::{Echelon, Matrix};
