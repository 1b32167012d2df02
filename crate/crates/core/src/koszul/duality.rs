use serde::Serialize;

use crate::algebra::{quadratic_dual, QuadraticAlgebra, QuadraticPresentation};
use crate::error::{Error, Result};
use crate::field::Field;

/// Outcome of the screen `Σ_{a+b=n} (−1)^a dim A^!_a dim A_b = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityCheck {
    pub holds: bool,
    pub first_failure_degree: Option<usize>,
    pub dims: Vec<usize>,
    pub dual_dims: Vec<usize>,
    /// The alternating sums for `n = 1..=N`.
    pub sums: Vec<i128>,
}

/// Necessary condition for Koszulity: `h_A(t) · h_{A^!}(−t) = 1` through
/// degree `N`.
pub fn hilbert_duality_check<F: Field>(p: &QuadraticPresentation<F>, n: usize) -> Result<DualityCheck> {
    if n == 0 {
        return Err(Error::OutOfRange("duality check needs N ≥ 1".into()));
    }
    let dims = QuadraticAlgebra::new(p.clone())?.hilbert_series(n)?.dims;
    let dual_dims = QuadraticAlgebra::new(quadratic_dual(p))?.hilbert_series(n)?.dims;
    let sums: Vec<i128> = (1..=n)
        .map(|deg| {
            (0..=deg)
                .map(|a| {
                    let term = dual_dims[a] as i128 * dims[deg - a] as i128;
                    if a % 2 == 0 { term } else { -term }
                })
                .sum()
        })
        .collect();
    let first_failure_degree = sums.iter().position(|&s| s != 0).map(|k| k + 1);
    Ok(DualityCheck { holds: first_failure_degree.is_none(), first_failure_degree, dims, dual_dims, sums })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn plane_and_free_pass() {
        let plane = QuadraticPresentation::polynomial_ring(Rationals, 2);
        let c = hilbert_duality_check(&plane, 6).unwrap();
        assert!(c.holds);
        assert_eq!(&c.dual_dims[..4], &[1, 2, 1, 0]);
        let free = QuadraticPresentation::free(Rationals, 2);
        let c = hilbert_duality_check(&free, 6).unwrap();
        assert!(c.holds);
        assert_eq!(&c.dual_dims[..3], &[1, 2, 0]);
    }
}
