//! Quadratic algebras `T(V)/(R)` and cyclic-type quadratic modules.

mod graded;
mod io;
mod presentation;
mod tower;

use std::sync::Arc;

pub use graded::{
    GradedComponent, GradedModule, HilbertSeries, ModulePresentation, ModuleSide, ProductTable, QuadraticAlgebra,
    PROJECTION_LIMIT,
};
pub use io::{Coefficient, ModuleFile, PresentationFile};
pub use presentation::{quadratic_dual, relation_matrix, relation_subspace_at, QuadraticPresentation};
pub(crate) use presentation::{checked_pow, unit_weight};
pub use tower::{Level, Tower, DEFAULT_LEVEL_LIMIT};

use crate::error::Result;
use crate::field::Field;

/// `A_n` of the algebra presented by `p`.
pub fn graded_component<F: Field>(p: &QuadraticPresentation<F>, n: usize) -> Result<GradedComponent<F>> {
    QuadraticAlgebra::new(p.clone())?.component(n)
}

/// `M_n` of the module presented by `m`; degree 0 is `M_0` itself.
pub fn module_graded_component<F: Field>(m: &ModulePresentation<F>, n: usize) -> Result<GradedComponent<F>> {
    let a = Arc::new(QuadraticAlgebra::new(m.algebra().clone())?);
    GradedModule::new(a, m.clone())?.component(n)
}
