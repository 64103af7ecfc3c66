//! Dimensions of linear systems of multi-degree hypersurfaces on `(P^1)^r`
//! through general double points, computed exactly over prime fields.
//!
//! The crate also decides defectivity of secant varieties of
//! Segre-Veronese embeddings (Terracini), implements the product-to-`P^r`
//! and Cremona reductions, the classification oracle with its four
//! exceptional families, checkable degeneration certificates, and the
//! catalecticant equation of the 7-secant variety of the `(2,2,2)`
//! embedding.
//!
//! Linear algebra is generic over [`gf::Field`]; the concrete scalars used
//! throughout are [`F307`] and [`Rational`].

pub mod catalect;
pub mod classify;
pub mod degen;
mod error;
pub mod gf;
pub mod interp;
pub mod model;
pub mod reduce;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{DimReport, FatPoints, LinearSystem, MultiDegree, Status};

/// The prime field used by default.
pub type F307 = gf::Fp<307>;

/// Exact rationals.
pub type Rational = num_rational::BigRational;

/// Default prime.
pub const DEFAULT_PRIME: u32 = 307;

/// Default number of independent samples per dimension computation.
pub const DEFAULT_RETRIES: usize = 3;
