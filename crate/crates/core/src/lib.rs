//! Exact computations with pre-Saito structures, Frobenius manifolds and
//! their alternate products.

pub mod algebra;
pub mod error;
pub mod grassmann;
pub mod hm;
pub mod mirror;
pub mod presaito;
pub mod projective;
pub mod report;

pub use error::{Error, Result};
pub use report::Report;
