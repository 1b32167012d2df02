//! Quadratic algebras over exact fields, Koszulity checks, Plücker and
//! Schubert presentations, and Frobenius splittings on affine charts.

pub mod algebra;
pub mod commands;
pub mod error;
pub mod field;
pub mod flag;
pub mod fsplit;
pub mod koszul;
pub mod linalg;
pub mod par;
pub mod report;
pub mod weight;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
