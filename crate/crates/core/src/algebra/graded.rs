//! Quadratic algebras and modules with cached graded components and
//! structure constants.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, SparseAccumulator, SparseVec, Subspace};
use crate::weight::Weight;

use super::presentation::{checked_pow, transpose_pairs, QuadraticPresentation};
use super::tower::{Level, Tower};

/// Largest `m0 · g^n` for which explicit projection matrices are built.
pub const PROJECTION_LIMIT: usize = 1 << 20;

/// Products indexed by `u * dim_right + v`.
pub type ProductTable<E> = Arc<Vec<SparseVec<E>>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertSeries {
    pub dims: Vec<usize>,
}

/// `A_n` (or `M_n`) with the projection from `M_0 ⊗ V^{⊗n}` onto its basis.
#[derive(Clone, Debug)]
pub struct GradedComponent<F: Field> {
    pub degree: usize,
    pub dimension: usize,
    /// `dimension × (m0 · g^n)`; column `b * g^n + w` is the normal form of
    /// the word with big-endian index `w` on base vector `b`.
    pub projection: Matrix<F>,
}

fn projection<F: Field>(tower: &Tower<F>, n: usize) -> Result<Matrix<F>> {
    let f = tower.field().clone();
    let g = tower.num_letters();
    let m0 = tower.base_dim();
    let cols = checked_pow(g, n)?
        .checked_mul(m0)
        .filter(|c| *c <= PROJECTION_LIMIT)
        .ok_or_else(|| Error::LimitExceeded(format!("projection matrix in degree {n}")))?;
    // normal forms of all words of the current length, in coordinate order
    let mut nf: Vec<SparseVec<F::Elem>> = (0..m0).map(|b| vec![(b as u32, f.one())]).collect();
    for d in 1..=n {
        let level = tower.level(d)?;
        let mut next = Vec::with_capacity(nf.len() * g);
        for v in &nf {
            for x in 0..g {
                let mut acc = SparseAccumulator::new(&f);
                for (t, c) in v {
                    acc.add_scaled(c, &level.from_prev[*t as usize * g + x]);
                }
                next.push(acc.finish());
            }
        }
        nf = next;
    }
    let dim = tower.dim(n)?;
    let mut m = Matrix::zeros(f, dim, cols);
    for (c, v) in nf.iter().enumerate() {
        for (r, x) in v {
            m.set(*r as usize, c, x.clone());
        }
    }
    Ok(m)
}

/// Extend `prev` (products with right factors of degree `b − 1`) by one
/// letter: `u · v = (u · v') · y` where `v = v' y` in `right`.
fn extend_right<F: Field>(
    f: &F,
    g: usize,
    target: &Level<F>,
    right: &Level<F>,
    prev: &[SparseVec<F::Elem>],
    left_dim: usize,
    prev_right_dim: usize,
) -> Vec<SparseVec<F::Elem>> {
    let right_dim = right.dim();
    let mut out = Vec::with_capacity(left_dim * right_dim);
    for u in 0..left_dim {
        for &(v_prev, y) in &right.parent {
            let mut acc = SparseAccumulator::new(f);
            for (t, c) in &prev[u * prev_right_dim + v_prev as usize] {
                acc.add_scaled(c, &target.from_prev[*t as usize * g + y as usize]);
            }
            out.push(acc.finish());
        }
    }
    out
}

fn identity_table<E: Clone>(one: &E, left: usize, right: usize) -> Vec<SparseVec<E>> {
    // one side has dimension 1, so the product is a relabelling
    (0..left * right).map(|i| vec![(i as u32, one.clone())]).collect()
}

type TableCache<E> = RwLock<HashMap<(usize, usize), ProductTable<E>>>;

fn cached<E>(cache: &TableCache<E>, key: (usize, usize)) -> Option<ProductTable<E>> {
    cache.read().expect("table cache").get(&key).cloned()
}

#[derive(Debug)]
pub struct QuadraticAlgebra<F: Field> {
    presentation: QuadraticPresentation<F>,
    tower: Tower<F>,
    products: TableCache<F::Elem>,
}

impl<F: Field> QuadraticAlgebra<F> {
    pub fn new(presentation: QuadraticPresentation<F>) -> Result<Self> {
        let f = presentation.field().clone();
        let g = presentation.num_generators();
        let tower = Tower::new(
            presentation.weights().to_vec(),
            presentation.relations(),
            vec![Weight::zero(presentation.weight_len())],
            &Subspace::zero(f, g),
        )?;
        Ok(Self { presentation, tower, products: RwLock::new(HashMap::new()) })
    }

    pub fn presentation(&self) -> &QuadraticPresentation<F> {
        &self.presentation
    }

    pub fn field(&self) -> &F {
        self.presentation.field()
    }

    pub fn tower(&self) -> &Tower<F> {
        &self.tower
    }

    pub fn num_generators(&self) -> usize {
        self.presentation.num_generators()
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        self.tower.dim(n)
    }

    pub fn level(&self, n: usize) -> Result<Arc<Level<F>>> {
        self.tower.level(n)
    }

    pub fn hilbert_series(&self, max_degree: usize) -> Result<HilbertSeries> {
        Ok(HilbertSeries { dims: self.tower.dims(max_degree)? })
    }

    pub fn component(&self, n: usize) -> Result<GradedComponent<F>> {
        let projection = projection(&self.tower, n)?;
        Ok(GradedComponent { degree: n, dimension: projection.rows(), projection })
    }

    /// Products `A_a × A_b → A_{a+b}`.
    pub fn product_table(&self, a: usize, b: usize) -> Result<ProductTable<F::Elem>> {
        if let Some(t) = cached(&self.products, (a, b)) {
            return Ok(t);
        }
        let f = self.field();
        let table = if a == 0 || b == 0 {
            let (da, db) = (self.dim(a)?, self.dim(b)?);
            Arc::new(identity_table(&f.one(), da, db))
        } else {
            let prev = self.product_table(a, b - 1)?;
            Arc::new(extend_right(
                f,
                self.num_generators(),
                &*self.level(a + b)?,
                &*self.level(b)?,
                &prev,
                self.dim(a)?,
                self.dim(b - 1)?,
            ))
        };
        self.products.write().expect("table cache").insert((a, b), table.clone());
        Ok(table)
    }

    /// Matrix of `A_a ⊗ A_b → A_{a+b}`: row `u * dim A_b + v` holds `u · v`.
    pub fn multiplication_matrix(&self, a: usize, b: usize) -> Result<Matrix<F>> {
        let t = self.product_table(a, b)?;
        Ok(Matrix::from_sparse_rows(self.field().clone(), self.dim(a + b)?, &t))
    }

    /// Coordinates of the word `letters` in `A_n`.
    pub fn word_normal_form(&self, letters: &[usize]) -> Result<SparseVec<F::Elem>> {
        let f = self.field();
        let g = self.num_generators();
        let mut v: SparseVec<F::Elem> = vec![(0, f.one())];
        for (d, &x) in letters.iter().enumerate() {
            if x >= g {
                return Err(Error::OutOfRange(format!("generator {x} of {g}")));
            }
            let level = self.level(d + 1)?;
            let mut acc = SparseAccumulator::new(f);
            for (t, c) in &v {
                acc.add_scaled(c, &level.from_prev[*t as usize * g + x]);
            }
            v = acc.finish();
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleSide {
    Right,
    Left,
}

/// Cyclic-type quadratic module: generators `M_0` in degree zero and
/// degree-one relations `J`.
///
/// For right modules `J ⊆ M_0 ⊗ V` (coordinate `b * g + x`); for left
/// modules `J ⊆ V ⊗ M_0` (coordinate `x * m0 + b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation<F: Field> {
    algebra: QuadraticPresentation<F>,
    side: ModuleSide,
    m0_weights: Vec<Weight>,
    relations1: Subspace<F>,
}

impl<F: Field> ModulePresentation<F> {
    pub fn new(
        algebra: QuadraticPresentation<F>,
        side: ModuleSide,
        m0_dim: usize,
        m0_weights: Option<Vec<Weight>>,
        relations1: Subspace<F>,
    ) -> Result<Self> {
        let g = algebra.num_generators();
        if m0_dim == 0 {
            return Err(Error::InvalidPresentation("a module needs at least one generator".into()));
        }
        if relations1.ambient_dim() != m0_dim * g {
            return Err(Error::InvalidPresentation(format!(
                "degree-one relations live in dimension {} but m0_dim · g = {}",
                relations1.ambient_dim(),
                m0_dim * g
            )));
        }
        if relations1.field() != algebra.field() {
            return Err(Error::FieldMismatch(
                relations1.field().spec().to_string(),
                algebra.field().spec().to_string(),
            ));
        }
        let m0_weights = m0_weights.unwrap_or_else(|| vec![Weight::zero(algebra.weight_len()); m0_dim]);
        if m0_weights.len() != m0_dim || m0_weights.iter().any(|w| w.len() != algebra.weight_len()) {
            return Err(Error::InvalidPresentation("module generator weights do not match".into()));
        }
        let m = Self { algebra, side, m0_weights, relations1 };
        m.tower()?;
        Ok(m)
    }

    /// `M_0 ⊗ A` with no relations.
    pub fn free(algebra: QuadraticPresentation<F>, side: ModuleSide, m0_dim: usize) -> Self {
        let f = algebra.field().clone();
        let g = algebra.num_generators();
        Self::new(algebra, side, m0_dim, None, Subspace::zero(f, m0_dim * g)).expect("free module is valid")
    }

    /// The ground field as a module: everything in positive degree killed.
    pub fn trivial(algebra: QuadraticPresentation<F>, side: ModuleSide) -> Self {
        let f = algebra.field().clone();
        let g = algebra.num_generators();
        Self::new(algebra, side, 1, None, Subspace::full(f, g)).expect("trivial module is valid")
    }

    pub fn algebra(&self) -> &QuadraticPresentation<F> {
        &self.algebra
    }

    pub fn side(&self) -> ModuleSide {
        self.side
    }

    pub fn m0_dim(&self) -> usize {
        self.m0_weights.len()
    }

    pub fn m0_weights(&self) -> &[Weight] {
        &self.m0_weights
    }

    pub fn relations1(&self) -> &Subspace<F> {
        &self.relations1
    }

    /// `(R, J)` in right orientation: `R ⊆ V⊗V` and `J ⊆ M_0⊗V`, mirrored
    /// for left modules.
    pub fn right_oriented(&self) -> (Subspace<F>, Subspace<F>) {
        let g = self.algebra.num_generators();
        match self.side {
            ModuleSide::Right => (self.algebra.relations().clone(), self.relations1.clone()),
            ModuleSide::Left => (
                self.algebra.opposite().relations().clone(),
                transpose_pairs(&self.relations1, g, self.m0_dim()),
            ),
        }
    }

    /// Tower of the module viewed as a right module (over the opposite
    /// algebra when the module is a left module).
    pub(crate) fn tower(&self) -> Result<Tower<F>> {
        let (r, j) = self.right_oriented();
        Tower::new(self.algebra.weights().to_vec(), &r, self.m0_weights.clone(), &j)
    }
}

/// A module presentation bound to its algebra, with cached components and
/// action tables.
#[derive(Debug)]
pub struct GradedModule<F: Field> {
    presentation: ModulePresentation<F>,
    algebra: Arc<QuadraticAlgebra<F>>,
    tower: Tower<F>,
    actions: TableCache<F::Elem>,
}

impl<F: Field> GradedModule<F> {
    pub fn new(algebra: Arc<QuadraticAlgebra<F>>, presentation: ModulePresentation<F>) -> Result<Self> {
        if presentation.algebra() != algebra.presentation() {
            return Err(Error::InvalidPresentation("module is presented over a different algebra".into()));
        }
        let tower = presentation.tower()?;
        Ok(Self { presentation, algebra, tower, actions: RwLock::new(HashMap::new()) })
    }

    pub fn presentation(&self) -> &ModulePresentation<F> {
        &self.presentation
    }

    pub fn algebra(&self) -> &Arc<QuadraticAlgebra<F>> {
        &self.algebra
    }

    pub fn side(&self) -> ModuleSide {
        self.presentation.side
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn tower(&self) -> &Tower<F> {
        &self.tower
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        self.tower.dim(n)
    }

    pub fn level(&self, n: usize) -> Result<Arc<Level<F>>> {
        self.tower.level(n)
    }

    pub fn hilbert_series(&self, max_degree: usize) -> Result<HilbertSeries> {
        Ok(HilbertSeries { dims: self.tower.dims(max_degree)? })
    }

    pub fn component(&self, n: usize) -> Result<GradedComponent<F>> {
        let projection = projection(&self.tower, n)?;
        Ok(GradedComponent { degree: n, dimension: projection.rows(), projection })
    }

    /// Right action `M_a × A_b → M_{a+b}`, indexed `m * dim A_b + u`.
    pub fn right_action(&self, a: usize, b: usize) -> Result<ProductTable<F::Elem>> {
        if self.side() != ModuleSide::Right {
            return Err(Error::InvalidPresentation("right action requested on a left module".into()));
        }
        if let Some(t) = cached(&self.actions, (a, b)) {
            return Ok(t);
        }
        let f = self.field();
        let table = if b == 0 {
            Arc::new(identity_table(&f.one(), self.dim(a)?, 1))
        } else {
            let prev = self.right_action(a, b - 1)?;
            Arc::new(extend_right(
                f,
                self.algebra.num_generators(),
                &*self.level(a + b)?,
                &*self.algebra.level(b)?,
                &prev,
                self.dim(a)?,
                self.algebra.dim(b - 1)?,
            ))
        };
        self.actions.write().expect("table cache").insert((a, b), table.clone());
        Ok(table)
    }

    /// Left action `A_b × N_a → N_{a+b}`, indexed `u * dim N_a + m`.
    ///
    /// An algebra basis word `y_1 … y_b` acts as `y_1 · (… (y_b · m))`, which
    /// in the opposite-algebra tower of `N` is right multiplication by the
    /// letters in reverse order.
    pub fn left_action(&self, b: usize, a: usize) -> Result<ProductTable<F::Elem>> {
        if self.side() != ModuleSide::Left {
            return Err(Error::InvalidPresentation("left action requested on a right module".into()));
        }
        if let Some(t) = cached(&self.actions, (b, a)) {
            return Ok(t);
        }
        let f = self.field();
        let g = self.algebra.num_generators();
        let na = self.dim(a)?;
        let table = if b == 0 {
            Arc::new(identity_table(&f.one(), 1, na))
        } else {
            // u = u' y, so u · m = u' · (y · m)
            let alg_b = self.algebra.level(b)?;
            let step = self.level(a + 1)?;
            let inner = self.left_action(b - 1, a + 1)?;
            let na1 = self.dim(a + 1)?;
            let mut out = Vec::with_capacity(alg_b.dim() * na);
            for &(u_prev, y) in &alg_b.parent {
                for m in 0..na {
                    let mut acc = SparseAccumulator::new(f);
                    for (t, c) in &step.from_prev[m * g + y as usize] {
                        acc.add_scaled(c, &inner[u_prev as usize * na1 + *t as usize]);
                    }
                    out.push(acc.finish());
                }
            }
            Arc::new(out)
        };
        self.actions.write().expect("table cache").insert((b, a), table.clone());
        Ok(table)
    }
}
