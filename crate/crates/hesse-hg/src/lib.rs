//! Workbench for a two-variable extension of the `3F2` hypergeometric
//! series: series evaluation inside its convergence domain, the rank-9
//! holonomic system it satisfies, the nine local solutions and their
//! normalizations, closed-form circuit matrices with the diagonal
//! intersection form, Euler-integral gamma factors, and an independent
//! numerical monodromy computation by Pfaffian transport along loops.
//!
//! The crate is organized around exact arithmetic where exactness matters
//! (rational parameters, operator algebra, polynomial identities) and
//! `Complex<f64>` everywhere else. Series kernels are generic over the
//! scalar (see [`scalar::HgScalar`]); `C64` and `Q` are the concrete
//! aliases used throughout.

pub mod cmat;
pub mod continuation;
pub mod error;
pub mod fundamental;
pub mod gamma;
pub mod integrals;
pub mod intersection;
pub mod monodromy;
pub mod numdiff;
pub mod params;
pub mod poly;
pub mod quad;
pub mod ratfun;
pub mod report;
pub mod scalar;
pub mod series;
pub mod weyl;

pub use error::{Error, Result};
pub use params::{ExpParams, GroupElement, HgParams};

/// Default complex scalar.
pub type C64 = num_complex::Complex64;
/// Exact rational scalar.
pub type Q = num_rational::BigRational;

/// Version tag attached to every machine-readable output.
pub const SCHEMA: &str = "hesse-hg/1";
