//! Type-A flag data: Plücker presentations of Grassmannians, Schubert and
//! opposite Schubert quotients, and independent dimension oracles.

mod pluecker;
mod schubert;

pub use pluecker::{
    binomial, bruhat_leq, coordinate_weights, pluecker_presentation, realize_graded_dim, subsets,
    weyl_dim_rectangular, Grassmannian, PlueckerIndex, MAX_PLUECKER_GENERATORS, REALIZE_LIMIT,
};
pub use schubert::{schubert_module, schubert_quotient_presentation, SchubertSide, SchubertSpec};
