use crate::field::Field;

use super::sparse::SparseVec;

/// Incremental row echelon form over sparse rows.
///
/// Rows are reduced through a dense scratch buffer against the stored pivot
/// rows; a row that survives becomes a new pivot, normalized so its leading
/// coefficient is one. Pivot rows are not back-substituted, which is all that
/// rank, membership and complement queries need.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    cols: usize,
    pivot_of: Vec<u32>,
    rows: Vec<SparseVec<F::Elem>>,
}

const NONE: u32 = u32::MAX;

impl<F: Field> Echelon<F> {
    pub fn new(field: F, cols: usize) -> Self {
        Self { field, cols, pivot_of: vec![NONE; cols], rows: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    /// Reduce `v` against the stored pivots; returns the (sparse) residue.
    pub fn reduce(&self, v: &[(u32, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let Some(&(first, _)) = v.first() else {
            return Vec::new();
        };
        let mut buf = vec![f.zero(); self.cols];
        for (c, x) in v {
            buf[*c as usize] = x.clone();
        }
        let mut out = Vec::new();
        for c in first as usize..self.cols {
            if f.is_zero(&buf[c]) {
                continue;
            }
            let p = self.pivot_of[c];
            if p == NONE {
                out.push((c as u32, std::mem::replace(&mut buf[c], f.zero())));
                continue;
            }
            let factor = f.neg(&buf[c]);
            for (k, y) in &self.rows[p as usize] {
                let k = *k as usize;
                buf[k] = f.add(&buf[k], &f.mul(&factor, y));
            }
        }
        out
    }

    /// Add `v` to the row space. Returns true if it was independent.
    pub fn insert(&mut self, v: &[(u32, F::Elem)]) -> bool {
        self.insert_reduced(self.reduce(v))
    }

    /// Add a residue already produced by [`Echelon::reduce`].
    pub fn insert_reduced(&mut self, mut r: SparseVec<F::Elem>) -> bool {
        let Some((lead, lc)) = r.first().cloned() else {
            return false;
        };
        let f = &self.field;
        let one = f.one();
        if lc != one {
            let inv = f.inv(&lc);
            for (_, x) in r.iter_mut() {
                *x = f.mul(x, &inv);
            }
        }
        self.pivot_of[lead as usize] = self.rows.len() as u32;
        self.rows.push(r);
        true
    }

    pub fn contains(&self, v: &[(u32, F::Elem)]) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Left kernel of the matrix whose rows are `rows` (each of width `cols`):
/// all coefficient vectors `c` with `Σ c_r rows[r] = 0`.
pub fn left_kernel_sparse<F: Field>(field: &F, cols: usize, rows: &[SparseVec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    let n = rows.len();
    let mut ech = Echelon::new(field.clone(), cols + n);
    let mut kernel = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let mut aug = row.clone();
        aug.push(((cols + r) as u32, field.one()));
        let res = ech.reduce(&aug);
        match res.first() {
            Some((c, _)) if (*c as usize) < cols => {
                ech.insert_reduced(res);
            }
            Some(_) => kernel.push(res.into_iter().map(|(c, x)| (c - cols as u32, x)).collect()),
            None => unreachable!("the identity part keeps every augmented row nonzero"),
        }
    }
    kernel
}

/// Vectors from `candidates` reduced against `base`, keeping those
/// independent modulo `base` and of each other. Returns the residues, which
/// span a complement of `base` inside `base + span(candidates)`.
pub fn complement_in<F: Field>(base: &Echelon<F>, candidates: &[SparseVec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    let mut ech = base.clone();
    let mut out = Vec::new();
    for v in candidates {
        let r = ech.reduce(v);
        if !r.is_empty() {
            out.push(r.clone());
            ech.insert_reduced(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn rank_and_kernel() {
        let f = PrimeField::new(7).unwrap();
        let rows = vec![vec![(0, 1), (1, 2)], vec![(0, 2), (1, 4)], vec![(2, 1)]];
        let mut e = Echelon::new(f, 3);
        let ranks: Vec<bool> = rows.iter().map(|r| e.insert(r)).collect();
        assert_eq!(ranks, vec![true, false, true]);
        assert_eq!(e.rank(), 2);
        let k = left_kernel_sparse(&f, 3, &rows);
        assert_eq!(k, vec![vec![(0, 5), (1, 1)]]);
    }

    #[test]
    fn complement_skips_dependent_candidates() {
        let f = PrimeField::new(5).unwrap();
        let mut base = Echelon::new(f, 3);
        base.insert(&[(0, 1)]);
        let c = complement_in(&base, &[vec![(0, 3)], vec![(0, 1), (1, 1)], vec![(1, 2)]]);
        assert_eq!(c, vec![vec![(1, 1)]]);
    }
}
