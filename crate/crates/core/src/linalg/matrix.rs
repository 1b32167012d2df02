use crate::error::{Error, Result};
use crate::field::Field;
use crate::par;

use super::sparse::SparseVec;
use super::subspace::Subspace;

/// Row counts times columns above which elimination fans out over rows.
const PARALLEL_ELIMINATION_THRESHOLD: usize = 1 << 16;

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|e| !field.is_canonical(e)) {
            return Err(Error::InvalidEntry(format!("{bad:?}"), field.spec().to_string()));
        }
        Ok(Self { field, rows, cols, data })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Self { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Self::new(field, n, cols, data)
    }

    pub fn from_sparse_rows(field: F, cols: usize, rows: &[SparseVec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (c, v) in r {
                m.data[i * cols + *c as usize] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        t
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.spec().to_string(),
                other.field.spec().to_string(),
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            let (dst_lo, dst_hi) = (i * other.cols, (i + 1) * other.cols);
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if f.is_zero(a) {
                    continue;
                }
                f.axpy(&mut out.data[dst_lo..dst_hi], a, other.row(k));
            }
        }
        Ok(out)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Shape(format!("vstack of widths {} and {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Apply to a row vector from the left: `v * self`.
    pub fn apply_row(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![self.field.zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if !self.field.is_zero(a) {
                self.field.axpy(&mut out, a, self.row(i));
            }
        }
        out
    }
}

/// Reduced row-echelon form of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub rank: usize,
    /// The nonzero rows of the reduced matrix.
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination in place; returns pivot columns. The first
/// `pivots.len()` rows hold the reduced form afterwards.
pub(crate) fn rref_in_place<F: Field>(field: &F, data: &mut [F::Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !field.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                data.swap(r * cols + j, pr * cols + j);
            }
        }
        let inv = field.inv(&data[r * cols + c]);
        field.scale(&mut data[r * cols + c..(r + 1) * cols], &inv);
        let pivot_row: Vec<F::Elem> = data[r * cols + c..(r + 1) * cols].to_vec();
        let eliminate = |i: usize, row: &mut [F::Elem]| {
            if i == r {
                return;
            }
            let factor = row[c].clone();
            if field.is_zero(&factor) {
                return;
            }
            let neg = field.neg(&factor);
            field.axpy(&mut row[c..], &neg, &pivot_row);
        };
        if rows * cols >= PARALLEL_ELIMINATION_THRESHOLD && par::is_parallel() {
            par::for_each_chunk_mut(&mut data[..rows * cols], cols, eliminate);
        } else {
            for (i, row) in data[..rows * cols].chunks_mut(cols).enumerate() {
                eliminate(i, row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Forward elimination only; returns the rank.
pub(crate) fn rank_in_place<F: Field>(field: &F, data: &mut [F::Elem], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !field.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                data.swap(r * cols + j, pr * cols + j);
            }
        }
        let inv = field.inv(&data[r * cols + c]);
        field.scale(&mut data[r * cols + c..(r + 1) * cols], &inv);
        let (head, tail) = data.split_at_mut((r + 1) * cols);
        let pivot_row = &head[r * cols + c..];
        for row in tail[..(rows - r - 1) * cols].chunks_mut(cols) {
            let factor = row[c].clone();
            if field.is_zero(&factor) {
                continue;
            }
            let neg = field.neg(&factor);
            field.axpy(&mut row[c..], &neg, pivot_row);
        }
        r += 1;
    }
    r
}

pub fn rref<F: Field>(m: &Matrix<F>) -> Rref<F> {
    let mut data = m.data.clone();
    let pivots = rref_in_place(&m.field, &mut data, m.rows, m.cols);
    let rank = pivots.len();
    data.truncate(rank * m.cols);
    Rref {
        rank,
        reduced: Matrix { field: m.field.clone(), rows: rank, cols: m.cols, data },
        pivots,
    }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut data = m.data.clone();
    rank_in_place(&m.field, &mut data, m.rows, m.cols)
}

/// The right kernel `{v : m v = 0}` as a subspace of `F^cols`.
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    let field = m.field.clone();
    let Rref { reduced, pivots, .. } = rref(m);
    let cols = m.cols;
    let mut is_pivot = vec![usize::MAX; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = r;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| is_pivot[c] == usize::MAX) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            let a = reduced.get(r, free);
            if !field.is_zero(a) {
                v[pc] = field.neg(a);
            }
        }
        basis.push(v);
    }
    Subspace::span(field, cols, basis).expect("kernel vectors have the right length")
}

/// The left kernel `{v : v m = 0}` as a subspace of `F^rows`.
pub fn left_kernel_basis<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    kernel_basis(&m.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(rows: &[&[i64]]) -> Matrix<Rationals> {
        let cols = rows[0].len();
        Matrix::from_rows(
            Rationals,
            cols,
            rows.iter().map(|r| r.iter().map(|&v| Rationals.from_i64(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_rref() {
        let r = rref(&Matrix::identity(Rationals, 2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn dependent_rows_collapse() {
        let r = rref(&q(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.reduced, q(&[&[1, 2]]));
    }

    #[test]
    fn equal_rows_over_gf2() {
        let f = PrimeField::new(2).unwrap();
        let m = Matrix::from_rows(f, 2, vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(rref(&m).rank, 1);
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn kernel_examples() {
        let z = Matrix::zeros(Rationals, 2, 3);
        assert_eq!(kernel_basis(&z).dim(), 3);
        assert_eq!(kernel_basis(&Matrix::identity(Rationals, 3)).dim(), 0);

        let f = PrimeField::new(3).unwrap();
        let m = Matrix::from_rows(f, 3, vec![vec![1, 1, 0]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.dim(), 2);
        assert!(k.contains_vector(&[1, 2, 0]));
        assert!(!k.contains_vector(&[1, 0, 0]));
    }

    #[test]
    fn rejects_non_canonical_entries() {
        let f = PrimeField::new(5).unwrap();
        assert!(Matrix::new(f, 1, 1, vec![7]).is_err());
        assert!(Matrix::new(f, 1, 2, vec![1]).is_err());
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Matrix::identity(PrimeField::new(3).unwrap(), 2);
        let b = Matrix::identity(PrimeField::new(5).unwrap(), 2);
        assert!(matches!(a.vstack(&b), Err(Error::FieldMismatch(..))));
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch(..))));
    }
}
