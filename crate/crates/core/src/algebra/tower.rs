//! Graded components of a quadratic right module, one degree at a time.
//!
//! Degree `n` is the quotient of `M_{n−1} ⊗ V` by the image of
//! `M_{n−2} ⊗ R` (degree 1: `M_0 ⊗ V` by `J`). Each basis vector is a
//! coordinate `(t, x)` of `M_{n−1} ⊗ V` that is not a pivot of the relation
//! image, so bases are closed under taking prefixes and coincide with the
//! non-pivot coordinates of the reduced relation space in `M_0 ⊗ V^{⊗n}`.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{rref_in_place, SparseAccumulator, SparseVec, Subspace};
use crate::par;
use crate::weight::Weight;

/// Default bound on `dim M_{n−1} · g`, the width of one construction step.
pub const DEFAULT_LEVEL_LIMIT: usize = 4_000_000;

#[derive(Debug)]
pub struct Level<F: Field> {
    pub degree: usize,
    /// For each basis vector `(t, x)`: index in the previous degree and the
    /// appended generator. Empty-word entries at degree 0 use `(b, u32::MAX)`.
    pub parent: Vec<(u32, u32)>,
    pub weights: Vec<Weight>,
    /// Normal form of `basis_{n−1}[t] · x_x` at index `t * g + x`.
    pub from_prev: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> Level<F> {
    pub fn dim(&self) -> usize {
        self.parent.len()
    }

    /// Basis indices grouped by weight, in increasing index order.
    pub fn blocks(&self) -> BTreeMap<Weight, Vec<u32>> {
        let mut out: BTreeMap<Weight, Vec<u32>> = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            out.entry(w.clone()).or_default().push(i as u32);
        }
        out
    }
}

#[derive(Debug)]
pub struct Tower<F: Field> {
    field: F,
    g: usize,
    letter_weights: Vec<Weight>,
    relation_rows: Vec<(Weight, SparseVec<F::Elem>)>,
    base_weights: Vec<Weight>,
    j_rows: Vec<(Weight, SparseVec<F::Elem>)>,
    limit: usize,
    levels: RwLock<Vec<Arc<Level<F>>>>,
}

fn homogeneous_rows<F: Field>(
    s: &Subspace<F>,
    left: &[Weight],
    right: &[Weight],
) -> Result<Vec<(Weight, SparseVec<F::Elem>)>> {
    let f = s.field();
    let g = right.len();
    let mut out = Vec::with_capacity(s.dim());
    for r in 0..s.dim() {
        let mut w: Option<Weight> = None;
        let mut v = Vec::new();
        for (c, x) in s.basis().row(r).iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            let here = left[c / g].add(&right[c % g]);
            match &w {
                None => w = Some(here),
                Some(prev) if *prev != here => {
                    return Err(Error::InvalidPresentation(format!(
                        "relation row {r} is not homogeneous ({prev} vs {here})"
                    )))
                }
                _ => {}
            }
            v.push((c as u32, x.clone()));
        }
        out.push((w.expect("reduced rows are nonzero"), v));
    }
    Ok(out)
}

impl<F: Field> Tower<F> {
    /// `letter_weights` grade `V`, `relations ⊆ V⊗V`, `base_weights` grade
    /// `M_0` and `j ⊆ M_0 ⊗ V` holds the degree-one module relations.
    pub fn new(
        letter_weights: Vec<Weight>,
        relations: &Subspace<F>,
        base_weights: Vec<Weight>,
        j: &Subspace<F>,
    ) -> Result<Self> {
        let g = letter_weights.len();
        let m0 = base_weights.len();
        if relations.ambient_dim() != g * g {
            return Err(Error::AmbientMismatch(relations.ambient_dim(), g * g));
        }
        if j.ambient_dim() != m0 * g {
            return Err(Error::AmbientMismatch(j.ambient_dim(), m0 * g));
        }
        let relation_rows = homogeneous_rows(relations, &letter_weights, &letter_weights)?;
        let j_rows = homogeneous_rows(j, &base_weights, &letter_weights)?;
        let level0 = Level {
            degree: 0,
            parent: (0..m0 as u32).map(|b| (b, u32::MAX)).collect(),
            weights: base_weights.clone(),
            from_prev: Vec::new(),
        };
        Ok(Self {
            field: relations.field().clone(),
            g,
            letter_weights,
            relation_rows,
            base_weights,
            j_rows,
            limit: DEFAULT_LEVEL_LIMIT,
            levels: RwLock::new(vec![Arc::new(level0)]),
        })
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn num_letters(&self) -> usize {
        self.g
    }

    pub fn letter_weights(&self) -> &[Weight] {
        &self.letter_weights
    }

    pub fn base_dim(&self) -> usize {
        self.base_weights.len()
    }

    pub fn level(&self, n: usize) -> Result<Arc<Level<F>>> {
        if let Some(l) = self.levels.read().expect("tower lock").get(n) {
            return Ok(l.clone());
        }
        let mut levels = self.levels.write().expect("tower lock");
        while levels.len() <= n {
            let next = self.build(&levels)?;
            levels.push(Arc::new(next));
        }
        Ok(levels[n].clone())
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        Ok(self.level(n)?.dim())
    }

    pub fn dims(&self, max: usize) -> Result<Vec<usize>> {
        (0..=max).map(|n| self.dim(n)).collect()
    }

    /// `(base index, letters)` of basis vector `i` in degree `n`.
    pub fn word(&self, n: usize, i: usize) -> Result<(usize, Vec<usize>)> {
        let mut letters = vec![0; n];
        let mut idx = i;
        for d in (1..=n).rev() {
            let (t, x) = self.level(d)?.parent[idx];
            letters[d - 1] = x as usize;
            idx = t as usize;
        }
        Ok((idx, letters))
    }

    fn build(&self, levels: &[Arc<Level<F>>]) -> Result<Level<F>> {
        let n = levels.len();
        let f = &self.field;
        let g = self.g;
        let prev = &levels[n - 1];
        let width = prev.dim() * g;
        if width > self.limit {
            return Err(Error::DegreeOverflow(format!(
                "degree {n} needs {width} coordinates (limit {})",
                self.limit
            )));
        }
        let col_weights: Vec<Weight> = (0..width)
            .map(|c| prev.weights[c / g].add(&self.letter_weights[c % g]))
            .collect();

        let images: Vec<(Weight, SparseVec<F::Elem>)> = if n == 1 {
            self.j_rows.clone()
        } else {
            let before = &levels[n - 2];
            let jobs: Vec<(usize, usize)> = (0..before.dim())
                .flat_map(|s| (0..self.relation_rows.len()).map(move |r| (s, r)))
                .collect();
            par::map(&jobs, |&(s, r)| {
                let (rw, row) = &self.relation_rows[r];
                let mut acc = SparseAccumulator::new(f);
                for (c, coef) in row {
                    let (y, x) = (*c as usize / g, *c as usize % g);
                    for (t, a) in &prev.from_prev[s * g + y] {
                        acc.push(*t * g as u32 + x as u32, f.mul(coef, a));
                    }
                }
                (before.weights[s].add(rw), acc.finish())
            })
        };

        let mut by_weight: BTreeMap<Weight, Vec<SparseVec<F::Elem>>> = BTreeMap::new();
        for (w, v) in images {
            if !v.is_empty() {
                by_weight.entry(w).or_default().push(v);
            }
        }
        let mut cols_by_weight: BTreeMap<&Weight, Vec<u32>> = BTreeMap::new();
        for (c, w) in col_weights.iter().enumerate() {
            if by_weight.contains_key(w) {
                cols_by_weight.entry(w).or_default().push(c as u32);
            }
        }
        let blocks: Vec<(&Weight, &Vec<SparseVec<F::Elem>>)> = by_weight.iter().collect();
        // per block: reduced rows (dense over the block's columns) and pivots
        let reduced: Vec<(Vec<u32>, Vec<F::Elem>, Vec<usize>)> = par::map(&blocks, |(w, rows)| {
            let cols = cols_by_weight[w].clone();
            let width = cols.len();
            let lookup = |c: u32| cols.binary_search(&c).expect("image stays in its weight block");
            let mut data = vec![f.zero(); rows.len() * width];
            for (i, r) in rows.iter().enumerate() {
                for (c, x) in r {
                    data[i * width + lookup(*c)] = x.clone();
                }
            }
            let pivots = rref_in_place(f, &mut data, rows.len(), width);
            data.truncate(pivots.len() * width);
            (cols, data, pivots)
        });

        let mut is_pivot = vec![false; width];
        for (cols, _, pivots) in &reduced {
            for &p in pivots {
                is_pivot[cols[p] as usize] = true;
            }
        }
        let mut new_index = vec![u32::MAX; width];
        let mut parent = Vec::new();
        let mut weights = Vec::new();
        for c in 0..width {
            if !is_pivot[c] {
                new_index[c] = parent.len() as u32;
                parent.push(((c / g) as u32, (c % g) as u32));
                weights.push(col_weights[c].clone());
            }
        }
        let one = f.one();
        let mut from_prev: Vec<SparseVec<F::Elem>> =
            (0..width).map(|c| if is_pivot[c] { Vec::new() } else { vec![(new_index[c], one.clone())] }).collect();
        for (cols, data, pivots) in &reduced {
            let w = cols.len();
            for (r, &p) in pivots.iter().enumerate() {
                let row = &data[r * w..(r + 1) * w];
                let mut v: SparseVec<F::Elem> = Vec::new();
                for (lc, x) in row.iter().enumerate() {
                    if lc != p && !f.is_zero(x) {
                        v.push((new_index[cols[lc] as usize], f.neg(x)));
                    }
                }
                v.sort_by_key(|e| e.0);
                from_prev[cols[p] as usize] = v;
            }
        }
        Ok(Level { degree: n, parent, weights, from_prev })
    }
}
