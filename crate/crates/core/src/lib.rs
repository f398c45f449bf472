//! Exact truncated series toolkit relating the super Yangian of type A(m,n)
//! to its quantum loop superalgebra.

pub mod cartan;
pub mod coeff;
pub mod error;
pub mod linalg;
pub mod phi;
pub mod qloop;
pub mod reconstruct;
pub mod relations;
pub mod report;
pub mod roots;
pub mod series;
pub mod suites;
pub mod yangian;

pub use coeff::Coefficient;
pub use error::{Error, Result};
pub use series::{Series, VarSpec};
