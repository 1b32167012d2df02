use crate::error::{Error, Result};
use crate::field::Field;

use super::matrix::{rref_in_place, Matrix};

/// A subspace of `F^n`, stored as the unique reduced row-echelon basis.
///
/// Two subspaces are equal exactly when their stored bases are identical,
/// so derived `Eq`/`Hash` give set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<F: Field> {
    ambient_dim: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// Span of the given vectors.
    pub fn span(field: F, ambient_dim: usize, vectors: Vec<Vec<F::Elem>>) -> Result<Self> {
        let m = Matrix::from_rows(field, ambient_dim, vectors)?;
        Ok(Self::from_matrix(&m))
    }

    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix<F>) -> Self {
        let field = m.field().clone();
        let (rows, cols) = (m.rows(), m.cols());
        let mut data = m.data().to_vec();
        let pivots = rref_in_place(&field, &mut data, rows, cols);
        data.truncate(pivots.len() * cols);
        let basis = Matrix::new(field, pivots.len(), cols, data).expect("reduced rows are canonical");
        Self { ambient_dim: cols, basis, pivots }
    }

    /// Build from rows already known to be in reduced echelon form.
    pub(crate) fn from_reduced_unchecked(basis: Matrix<F>, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(basis.rows(), pivots.len());
        Self { ambient_dim: basis.cols(), basis, pivots }
    }

    pub fn zero(field: F, ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Matrix::zeros(field, 0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(field: F, ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(
                self.field().spec().to_string(),
                other.field().spec().to_string(),
            ));
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    /// Reduce `v` modulo this subspace: afterwards it is zero on every pivot
    /// column. The result is the canonical representative of `v + self`.
    pub fn reduce_vector(&self, v: &mut [F::Elem]) {
        let f = self.field();
        for (r, &c) in self.pivots.iter().enumerate() {
            let a = v[c].clone();
            if !f.is_zero(&a) {
                let neg = f.neg(&a);
                f.axpy(v, &neg, self.basis.row(r));
            }
        }
    }

    pub fn contains_vector(&self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length must match the ambient dimension");
        let mut w = v.to_vec();
        self.reduce_vector(&mut w);
        w.iter().all(|x| self.field().is_zero(x))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.compatible(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok((0..other.dim()).all(|i| self.contains_vector(other.basis.row(i))))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        if self.dim() >= other.dim() && self.contains(other)? {
            return Ok(self.clone());
        }
        if other.contains(self)? {
            return Ok(other.clone());
        }
        Ok(Self::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    /// Intersection by the Zassenhaus construction: row-reduce
    /// `[[A, A], [B, 0]]`; the rows whose left half vanishes carry a basis of
    /// `A ∩ B` in their right half.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let f = self.field().clone();
        let n = self.ambient_dim;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f, n));
        }
        if self.contains(other)? {
            return Ok(other.clone());
        }
        if other.contains(self)? {
            return Ok(self.clone());
        }
        let rows = self.dim() + other.dim();
        let cols = 2 * n;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..self.dim() {
            data.extend_from_slice(self.basis.row(i));
            data.extend_from_slice(self.basis.row(i));
        }
        for i in 0..other.dim() {
            data.extend_from_slice(other.basis.row(i));
            data.extend(std::iter::repeat_n(f.zero(), n));
        }
        let pivots = rref_in_place(&f, &mut data, rows, cols);
        let mut meet = Vec::new();
        for (r, &c) in pivots.iter().enumerate() {
            if c >= n {
                meet.push(data[r * cols + n..(r + 1) * cols].to_vec());
            }
        }
        Self::span(f, n, meet)
    }

    /// Coordinates of `v` (assumed to lie in the subspace) in the stored basis.
    pub fn coordinates(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.pivots.iter().map(|&c| v[c].clone()).collect()
    }
}

/// Join in the subspace lattice.
pub fn sum<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<Subspace<F>> {
    a.sum(b)
}

/// Meet in the subspace lattice.
pub fn intersect<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<Subspace<F>> {
    a.intersect(b)
}

/// `L ⊗ w ⊗ R` inside `F^{left_dim} ⊗ F^d ⊗ F^{right_dim}`, where `L` and `R`
/// are the full spaces. Coordinates are big-endian: `(a, c, b)` sits at
/// `(a * d + c) * right_dim + b`.
pub fn tensor_position_embed<F: Field>(w: &Subspace<F>, left_dim: usize, right_dim: usize) -> Result<Subspace<F>> {
    if left_dim == 0 || right_dim == 0 {
        return Err(Error::OutOfRange(format!(
            "tensor factors must have positive dimension (got {left_dim} and {right_dim})"
        )));
    }
    let f = w.field().clone();
    let d = w.ambient_dim();
    let ambient = left_dim * d * right_dim;
    let rows = left_dim * w.dim() * right_dim;
    let mut basis = Matrix::zeros(f, rows, ambient);
    let mut pivots = Vec::with_capacity(rows);
    let mut r = 0;
    // rows in (a, row, b) order are already reduced with increasing pivots
    for a in 0..left_dim {
        for (k, &pc) in w.pivots().iter().enumerate() {
            let src = w.basis().row(k);
            for b in 0..right_dim {
                for (c, v) in src.iter().enumerate() {
                    if !w.field().is_zero(v) {
                        basis.set(r, (a * d + c) * right_dim + b, v.clone());
                    }
                }
                pivots.push((a * d + pc) * right_dim + b);
                r += 1;
            }
        }
    }
    Ok(Subspace::from_reduced_unchecked(basis, pivots))
}
