use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel_basis, tensor_position_embed, Matrix, Subspace};
use crate::weight::Weight;

/// `A = T(V)/(R)` with `V` spanned by labelled generators and `R ⊆ V⊗V`.
///
/// Tensor coordinates are big-endian: `e_y ⊗ e_x` sits at `y * g + x`.
/// Generators carry weight vectors and `R` must be spanned by homogeneous
/// tensors; use empty weights when there is no grading beyond degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPresentation<F: Field> {
    labels: Vec<String>,
    weights: Vec<Weight>,
    relations: Subspace<F>,
}

impl<F: Field> QuadraticPresentation<F> {
    pub fn new(labels: Vec<String>, weights: Option<Vec<Weight>>, relations: Subspace<F>) -> Result<Self> {
        let g = labels.len();
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() {
                return Err(Error::InvalidPresentation("empty generator label".into()));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate generator label `{l}`")));
            }
        }
        if relations.ambient_dim() != g * g {
            return Err(Error::InvalidPresentation(format!(
                "relations live in dimension {} but {g} generators need {}",
                relations.ambient_dim(),
                g * g
            )));
        }
        let weights = weights.unwrap_or_else(|| vec![Weight::default(); g]);
        if weights.len() != g {
            return Err(Error::InvalidPresentation(format!("{} weights for {g} generators", weights.len())));
        }
        if let Some(w) = weights.first() {
            if weights.iter().any(|v| v.len() != w.len()) {
                return Err(Error::InvalidPresentation("weight vectors differ in length".into()));
            }
        }
        let p = Self { labels, weights, relations };
        p.relation_weights()?;
        Ok(p)
    }

    /// Tensor algebra on `g` generators named `x0, x1, ...`.
    pub fn free(field: F, g: usize) -> Self {
        let labels = (0..g).map(|i| format!("x{i}")).collect();
        Self::new(labels, None, Subspace::zero(field, g * g)).expect("free presentation is valid")
    }

    /// Polynomial ring: the commutators `x_i⊗x_j − x_j⊗x_i`, graded by the
    /// standard basis of `Z^g`.
    pub fn polynomial_ring(field: F, g: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..g {
            for j in i + 1..g {
                let mut v = vec![field.zero(); g * g];
                v[i * g + j] = field.one();
                v[j * g + i] = field.neg(&field.one());
                rows.push(v);
            }
        }
        let labels = (0..g).map(|i| format!("x{i}")).collect();
        let weights = (0..g).map(|i| unit_weight(g, i)).collect();
        let r = Subspace::span(field, g * g, rows).expect("rows have length g^2");
        Self::new(labels, Some(weights), r).expect("polynomial ring presentation is valid")
    }

    /// Monomial algebra killing the listed products `e_y ⊗ e_x`.
    pub fn monomial(field: F, g: usize, killed: &[(usize, usize)]) -> Result<Self> {
        let mut rows = Vec::new();
        for &(y, x) in killed {
            if y >= g || x >= g {
                return Err(Error::OutOfRange(format!("monomial ({y},{x}) with {g} generators")));
            }
            let mut v = vec![field.zero(); g * g];
            v[y * g + x] = field.one();
            rows.push(v);
        }
        let labels = (0..g).map(|i| format!("x{i}")).collect();
        let weights = (0..g).map(|i| unit_weight(g, i)).collect();
        Self::new(labels, Some(weights), Subspace::span(field, g * g, rows)?)
    }

    pub fn field(&self) -> &F {
        self.relations.field()
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn relations(&self) -> &Subspace<F> {
        &self.relations
    }

    pub fn weight_len(&self) -> usize {
        self.weights.first().map_or(0, Weight::len)
    }

    /// Weight of each reduced basis row of `R`; fails if a row mixes weights.
    pub fn relation_weights(&self) -> Result<Vec<Weight>> {
        let g = self.num_generators();
        let f = self.field();
        let mut out = Vec::with_capacity(self.relations.dim());
        for r in 0..self.relations.dim() {
            let row = self.relations.basis().row(r);
            let mut w: Option<Weight> = None;
            for (c, v) in row.iter().enumerate() {
                if f.is_zero(v) {
                    continue;
                }
                let here = self.weights[c / g].add(&self.weights[c % g]);
                match &w {
                    None => w = Some(here),
                    Some(prev) if *prev != here => {
                        return Err(Error::InvalidPresentation(format!(
                            "relation {r} is not homogeneous for the generator weights ({prev} vs {here})"
                        )))
                    }
                    _ => {}
                }
            }
            out.push(w.expect("reduced rows are nonzero"));
        }
        Ok(out)
    }

    /// Same generators with every relation reversed by `y⊗x ↦ x⊗y`.
    pub fn opposite(&self) -> Self {
        let g = self.num_generators();
        let flipped = transpose_pairs(&self.relations, g, g);
        Self { labels: self.labels.clone(), weights: self.weights.clone(), relations: flipped }
    }

    /// Drop the weight vectors, leaving only the degree grading.
    pub fn without_weights(&self) -> Self {
        Self {
            labels: self.labels.clone(),
            weights: vec![Weight::default(); self.labels.len()],
            relations: self.relations.clone(),
        }
    }
}

pub(crate) fn unit_weight(len: usize, i: usize) -> Weight {
    let mut w = Weight::zero(len);
    w.0[i] = 1;
    w
}

/// Apply the swap `F^a ⊗ F^b → F^b ⊗ F^a` to every vector of `s`.
pub(crate) fn transpose_pairs<F: Field>(s: &Subspace<F>, a: usize, b: usize) -> Subspace<F> {
    let f = s.field().clone();
    let rows = (0..s.dim())
        .map(|r| {
            let src = s.basis().row(r);
            let mut v = vec![f.zero(); a * b];
            for i in 0..a {
                for j in 0..b {
                    v[j * a + i] = src[i * b + j].clone();
                }
            }
            v
        })
        .collect();
    Subspace::span(f, a * b, rows).expect("swap preserves the ambient dimension")
}

/// `W_k = V^{⊗k−1} ⊗ R ⊗ V^{⊗n−k−1}` inside `V^{⊗n}`.
pub fn relation_subspace_at<F: Field>(p: &QuadraticPresentation<F>, n: usize, k: usize) -> Result<Subspace<F>> {
    if n < 2 || k < 1 || k > n - 1 {
        return Err(Error::OutOfRange(format!("relation position k={k} in degree n={n} (need n ≥ 2, 1 ≤ k ≤ n−1)")));
    }
    let g = p.num_generators();
    let left = checked_pow(g, k - 1)?;
    let right = checked_pow(g, n - k - 1)?;
    tensor_position_embed(p.relations(), left, right)
}

pub(crate) fn checked_pow(g: usize, e: usize) -> Result<usize> {
    g.checked_pow(e as u32)
        .filter(|v| *v <= u32::MAX as usize)
        .ok_or_else(|| Error::LimitExceeded(format!("{g}^{e} tensor coordinates")))
}

/// The quadratic dual `T(V*)/(R^⊥)`, where `R^⊥` annihilates `R` under
/// `⟨e*_a ⊗ e*_b, e_c ⊗ e_d⟩ = δ_ac δ_bd`.
pub fn quadratic_dual<F: Field>(p: &QuadraticPresentation<F>) -> QuadraticPresentation<F> {
    let g = p.num_generators();
    let f = p.field().clone();
    let perp = if p.relations().is_zero() {
        Subspace::full(f, g * g)
    } else {
        kernel_basis(p.relations().basis())
    };
    let labels = p.labels().iter().map(|l| format!("{l}*")).collect();
    let weights = p.weights().iter().map(Weight::neg).collect();
    QuadraticPresentation::new(labels, Some(weights), perp).expect("annihilator of a homogeneous space is homogeneous")
}

/// Matrix with one row per basis vector of `R`, exposed for file output.
pub fn relation_matrix<F: Field>(p: &QuadraticPresentation<F>) -> &Matrix<F> {
    p.relations().basis()
}
