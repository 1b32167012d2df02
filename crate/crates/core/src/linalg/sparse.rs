use crate::field::Field;

/// Sparse vector as `(index, value)` pairs, strictly increasing in index,
/// with no explicit zeros.
pub type SparseVec<E> = Vec<(u32, E)>;

/// Collects scaled sparse vectors and merges them into one canonical
/// [`SparseVec`].
pub struct SparseAccumulator<'a, F: Field> {
    field: &'a F,
    terms: Vec<(u32, F::Elem)>,
}

impl<'a, F: Field> SparseAccumulator<'a, F> {
    pub fn new(field: &'a F) -> Self {
        Self { field, terms: Vec::new() }
    }

    pub fn push(&mut self, index: u32, value: F::Elem) {
        if !self.field.is_zero(&value) {
            self.terms.push((index, value));
        }
    }

    pub fn add_scaled(&mut self, c: &F::Elem, v: &[(u32, F::Elem)]) {
        if self.field.is_zero(c) {
            return;
        }
        let one = self.field.one();
        for (i, x) in v {
            let val = if *c == one { x.clone() } else { self.field.mul(c, x) };
            self.terms.push((*i, val));
        }
    }

    pub fn finish(mut self) -> SparseVec<F::Elem> {
        self.terms.sort_by_key(|t| t.0);
        let f = self.field;
        let mut out: SparseVec<F::Elem> = Vec::with_capacity(self.terms.len());
        for (i, v) in self.terms {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w = f.add(w, &v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !f.is_zero(v));
        out
    }
}

pub fn scale_sparse<F: Field>(field: &F, c: &F::Elem, v: &[(u32, F::Elem)]) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, field.mul(c, x))).collect()
}

pub fn to_dense<F: Field>(field: &F, len: usize, v: &[(u32, F::Elem)]) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); len];
    for (i, x) in v {
        out[*i as usize] = x.clone();
    }
    out
}

pub fn from_dense<F: Field>(field: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, x)| (i as u32, x.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn accumulator_merges_and_cancels() {
        let f = PrimeField::new(5).unwrap();
        let mut acc = SparseAccumulator::new(&f);
        acc.add_scaled(&1, &[(0, 1), (3, 2)]);
        acc.add_scaled(&4, &[(0, 1), (1, 1)]);
        assert_eq!(acc.finish(), vec![(1, 4), (3, 2)]);
    }
}
