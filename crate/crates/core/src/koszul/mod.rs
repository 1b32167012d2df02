//! Koszulity checks: distributivity of relation lattices, Tor from bar
//! complexes and minimal resolutions, and the Hilbert series screen.

mod bar;
mod corpus;
mod duality;
mod engine;
mod lattice;
mod resolution;
mod tor;

pub use bar::{bar_homology, bar_tor_table, module_tor_table, pair_tor_table, BarLimits, BarOptions, BarResult, SignConvention};
pub use corpus::{
    check_agreement, corpus_seeds, find_non_koszul, random_presentation, random_presentation_with, Agreement, RandomInstance,
    RandomStyle,
};
pub use duality::{hilbert_duality_check, DualityCheck};
pub use engine::{bar_group_bound, module_tor, pair_tor, tor_table, TorEngine, AUTO_BAR_LIMIT};
pub use lattice::{
    is_distributive, koszul_lattice_test, koszul_module_lattice_test, lattice_closure, BlockWitness, DegreeVerdict,
    Derivation, DistributivityVerdict, LatticeClosure, Witness, DEFAULT_CAP, LATTICE_AMBIENT_LIMIT,
};
pub use resolution::{
    minimal_resolution, resolution_module_tor_table, resolution_pair_tor_table, resolution_tor_table, Generator,
    MinimalResolution,
};
pub use tor::TorTable;
