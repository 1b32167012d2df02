//! Frobenius splittings on polynomial charts in characteristic `p`.

mod chart;
mod poly;
mod splitting;

pub use chart::{schubert_chart_data, ChartCase, ChartData};
pub use poly::{monomials_up_to, parse_polynomial_file, render_polynomial_file, CharPPolynomial, Exponents};
pub use splitting::{
    cartier_phi, closure_property_check, compatibility_check, frobenius_section_check, is_splitting, split_apply,
    truncated_dim, ChartIdeal, ClosureReport, CompatibilityReport, Counterexample, SplittingCandidate,
};
