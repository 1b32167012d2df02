use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{ModulePresentation, ModuleSide, QuadraticPresentation};
use crate::error::Result;
use crate::field::Field;
use crate::linalg::Subspace;

use super::pluecker::{bruhat_leq, Grassmannian, PlueckerIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchubertSide {
    Standard,
    Opposite,
}

/// A Schubert variety `X_w` (or opposite Schubert variety `X^w`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchubertSpec {
    pub w: PlueckerIndex,
    pub side: SchubertSide,
}

impl SchubertSpec {
    pub fn standard(w: PlueckerIndex) -> Self {
        Self { w, side: SchubertSide::Standard }
    }

    pub fn opposite(w: PlueckerIndex) -> Self {
        Self { w, side: SchubertSide::Opposite }
    }

    /// Whether the coordinate `p_τ` survives on the variety.
    pub fn keeps(&self, tau: &PlueckerIndex) -> Result<bool> {
        match self.side {
            SchubertSide::Standard => bruhat_leq(tau, &self.w),
            SchubertSide::Opposite => bruhat_leq(&self.w, tau),
        }
    }
}

impl fmt::Display for SchubertSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            SchubertSide::Standard => write!(f, "X_{}", self.w),
            SchubertSide::Opposite => write!(f, "X^{}", self.w),
        }
    }
}

fn killed<F: Field>(gr: &Grassmannian<F>, spec: &SchubertSpec) -> Result<Vec<usize>> {
    gr.index_of(&spec.w)?;
    let mut out = Vec::new();
    for (i, tau) in gr.subsets.iter().enumerate() {
        if !spec.keeps(tau)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// The coordinate ring of the Schubert variety as a cyclic module over the
/// Grassmannian's ring: `M_0 = k` and `J` spanned by the vanishing
/// coordinates.
pub fn schubert_module<F: Field>(
    gr: &Grassmannian<F>,
    spec: &SchubertSpec,
    side: ModuleSide,
) -> Result<ModulePresentation<F>> {
    let f = gr.presentation.field().clone();
    let g = gr.presentation.num_generators();
    let rows = killed(gr, spec)?
        .into_iter()
        .map(|i| {
            let mut v = vec![f.zero(); g];
            v[i] = f.one();
            v
        })
        .collect();
    // with M_0 one-dimensional, M_0⊗V and V⊗M_0 share coordinates
    let j = Subspace::span(f, g, rows)?;
    ModulePresentation::new(gr.presentation.clone(), side, 1, None, j)
}

/// The Schubert variety's coordinate ring presented on the surviving
/// coordinates, with relations the projection of `R`.
pub fn schubert_quotient_presentation<F: Field>(
    gr: &Grassmannian<F>,
    spec: &SchubertSpec,
) -> Result<QuadraticPresentation<F>> {
    let p = &gr.presentation;
    let f = p.field().clone();
    let g = p.num_generators();
    let dead = killed(gr, spec)?;
    let alive: Vec<usize> = (0..g).filter(|i| !dead.contains(i)).collect();
    let h = alive.len();
    let rows = (0..p.relations().dim())
        .map(|r| {
            let src = p.relations().basis().row(r);
            let mut v = vec![f.zero(); h * h];
            for (a, &s) in alive.iter().enumerate() {
                for (b, &t) in alive.iter().enumerate() {
                    v[a * h + b] = src[s * g + t].clone();
                }
            }
            v
        })
        .collect();
    let labels = alive.iter().map(|&i| p.labels()[i].clone()).collect();
    let weights = alive.iter().map(|&i| p.weights()[i].clone()).collect();
    QuadraticPresentation::new(labels, Some(weights), Subspace::span(f, h * h, rows)?)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{GradedModule, QuadraticAlgebra};
    use crate::field::PrimeField;

    fn gr24() -> Grassmannian<PrimeField> {
        Grassmannian::new(2, 4, PrimeField::default()).unwrap()
    }

    #[test]
    fn schubert_13_kills_four_coordinates() {
        let gr = gr24();
        let w: PlueckerIndex = "13".parse().unwrap();
        let m = schubert_module(&gr, &SchubertSpec::standard(w.clone()), ModuleSide::Right).unwrap();
        assert_eq!(m.relations1().dim(), 4);
        let q = schubert_quotient_presentation(&gr, &SchubertSpec::standard(w)).unwrap();
        assert_eq!(q.labels(), ["p12", "p13"]);
    }

    #[test]
    fn extreme_schubert_varieties() {
        let gr = gr24();
        let a = Arc::new(QuadraticAlgebra::new(gr.presentation.clone()).unwrap());
        let top = schubert_module(&gr, &SchubertSpec::standard(gr.top()), ModuleSide::Right).unwrap();
        assert!(top.relations1().is_zero());
        let bottom = schubert_module(&gr, &SchubertSpec::standard(gr.bottom()), ModuleSide::Right).unwrap();
        let m = GradedModule::new(a, bottom).unwrap();
        assert_eq!(m.hilbert_series(4).unwrap().dims, vec![1, 1, 1, 1, 1]);
        let q = schubert_quotient_presentation(&gr, &SchubertSpec::standard(gr.top())).unwrap();
        assert_eq!(&q, &gr.presentation);
    }
}
