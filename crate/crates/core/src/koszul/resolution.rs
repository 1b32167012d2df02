//! Minimal free resolutions of right modules, built degree by degree.
//!
//! `F_i = G_i ⊗ A` with `G_i` a graded space of generators. In each internal
//! degree `j` the generators of `G_i` in degree `j` are chosen as a
//! complement of `D_i(old generators)` inside `ker D_{i−1}`, one weight block
//! at a time. Then `dim Tor_{i,j}(M, k) = dim G_{i,j}`, and `Tor(M, N)` is the
//! homology of `G ⊗ N`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::algebra::{GradedModule, ModulePresentation, ModuleSide, ProductTable, QuadraticAlgebra, QuadraticPresentation};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{complement_in, left_kernel_sparse, Echelon, SparseAccumulator, SparseVec};
use crate::par;
use crate::weight::Weight;

use super::tor::TorTable;

/// One generator of `G_i`: its degree, weight and `D_i` image, stored as
/// terms `(generator of G_{i−1}, basis index of A, coefficient)`. For
/// `i = 0` the image is an element of `M` with generator index 0.
#[derive(Clone, Debug)]
pub struct Generator<E> {
    pub degree: usize,
    pub weight: Weight,
    pub image: Vec<(u32, u32, E)>,
}

#[derive(Clone, Debug)]
pub struct MinimalResolution<F: Field> {
    pub generators: Vec<Vec<Generator<F::Elem>>>,
    pub betti: TorTable,
}

/// The degree-`j` part of a free module (or of `M`) grouped by weight.
/// Elements are `(generator, basis index)`.
struct Layout {
    blocks: BTreeMap<Weight, Vec<(u32, u32)>>,
    position: HashMap<(u32, u32), u32>,
}

impl Layout {
    fn new<'a>(pieces: impl Iterator<Item = (u32, &'a Weight, &'a [Weight])>) -> Self {
        let mut blocks: BTreeMap<Weight, Vec<(u32, u32)>> = BTreeMap::new();
        for (h, hw, basis) in pieces {
            for (t, w) in basis.iter().enumerate() {
                blocks.entry(hw.add(w)).or_default().push((h, t as u32));
            }
        }
        let mut position = HashMap::new();
        for elems in blocks.values() {
            for (k, e) in elems.iter().enumerate() {
                position.insert(*e, k as u32);
            }
        }
        Self { blocks, position }
    }

    fn block_len(&self, w: &Weight) -> usize {
        self.blocks.get(w).map_or(0, Vec::len)
    }
}

/// Tables needed in internal degree `j`, fetched up front so the parallel
/// sections never touch the caches.
struct Tables<E> {
    algebra: Vec<Vec<ProductTable<E>>>,
    module: Vec<Vec<ProductTable<E>>>,
    algebra_dims: Vec<usize>,
    algebra_weights: Vec<Vec<Weight>>,
    module_weights: Vec<Vec<Weight>>,
}

impl<E: Clone> Tables<E> {
    fn fetch<F: Field<Elem = E>>(a: &QuadraticAlgebra<F>, m: &GradedModule<F>, j: usize) -> Result<Self> {
        let mut algebra = Vec::new();
        let mut module = Vec::new();
        for x in 0..=j {
            let mut ra = Vec::new();
            let mut rm = Vec::new();
            for y in 0..=j - x {
                ra.push(a.product_table(x, y)?);
                rm.push(m.right_action(x, y)?);
            }
            algebra.push(ra);
            module.push(rm);
        }
        Ok(Self {
            algebra,
            module,
            algebra_dims: (0..=j).map(|d| a.dim(d)).collect::<Result<_>>()?,
            algebra_weights: (0..=j).map(|d| Ok(a.level(d)?.weights.clone())).collect::<Result<_>>()?,
            module_weights: (0..=j).map(|d| Ok(m.level(d)?.weights.clone())).collect::<Result<_>>()?,
        })
    }
}

struct Resolver<'a, F: Field> {
    field: &'a F,
    gens: Vec<Vec<Generator<F::Elem>>>,
}

impl<'a, F: Field> Resolver<'a, F> {
    fn free_layout(&self, i: usize, j: usize, t: &Tables<F::Elem>, below: bool) -> Layout {
        Layout::new(
            self.gens[i]
                .iter()
                .enumerate()
                .filter(|(_, h)| if below { h.degree < j } else { h.degree <= j })
                .map(|(k, h)| (k as u32, &h.weight, t.algebra_weights[j - h.degree].as_slice())),
        )
    }

    fn target_layout(&self, i: usize, j: usize, t: &Tables<F::Elem>, zero: &'a Weight) -> Layout {
        if i == 0 {
            Layout::new(std::iter::once((0u32, zero, t.module_weights[j].as_slice())))
        } else {
            self.free_layout(i - 1, j, t, false)
        }
    }

    /// `D_i(h · c)` in local coordinates of the target block.
    fn apply(&self, i: usize, h: u32, c: u32, j: usize, t: &Tables<F::Elem>, target: &Layout) -> SparseVec<F::Elem> {
        let f = self.field;
        let gen = &self.gens[i][h as usize];
        let b = j - gen.degree;
        let db = t.algebra_dims[b];
        let mut acc = SparseAccumulator::new(f);
        for (hp, cp, coef) in &gen.image {
            let table = if i == 0 {
                &t.module[gen.degree][b]
            } else {
                let a = gen.degree - self.gens[i - 1][*hp as usize].degree;
                &t.algebra[a][b]
            };
            for (x, v) in &table[*cp as usize * db + c as usize] {
                acc.push(target.position[&(*hp, *x)], f.mul(coef, v));
            }
        }
        acc.finish()
    }

    fn block_rows(
        &self,
        i: usize,
        j: usize,
        t: &Tables<F::Elem>,
        source: &Layout,
        target: &Layout,
    ) -> Vec<(Weight, Vec<SparseVec<F::Elem>>)> {
        let blocks: Vec<(&Weight, &Vec<(u32, u32)>)> = source.blocks.iter().collect();
        par::map(&blocks, |(w, elems)| {
            ((*w).clone(), elems.iter().map(|&(h, c)| self.apply(i, h, c, j, t, target)).collect())
        })
    }

    fn degree(&mut self, j: usize, top: usize, t: &Tables<F::Elem>, betti: &mut TorTable, zero: &'a Weight) {
        let f = self.field;
        // dim ker D_{i−1} per weight block, for the previous i
        let mut prev_kernel: HashMap<Weight, usize> = HashMap::new();
        for i in 0..=top.min(j) {
            let target = self.target_layout(i, j, t, zero);
            let source = self.free_layout(i, j, t, true);
            let rows = self.block_rows(i, j, t, &source, &target);
            let echelons: HashMap<Weight, Echelon<F>> = par::map(&rows, |(w, rs)| {
                let mut e = Echelon::new(f.clone(), target.block_len(w));
                for r in rs {
                    e.insert(r);
                }
                (w.clone(), e)
            })
            .into_iter()
            .collect();
            let mut kernel_dims = HashMap::new();
            let mut count = 0;
            let mut fresh = Vec::new();
            for (w, elems) in &target.blocks {
                let kdim = if i == 0 { elems.len() } else { elems.len() - prev_kernel.get(w).copied().unwrap_or(0) };
                kernel_dims.insert(w.clone(), kdim);
                let rank = echelons.get(w).map_or(0, Echelon::rank);
                assert!(rank <= kdim, "image exceeds kernel in homological degree {i}, internal degree {j}");
                if rank < kdim {
                    fresh.push((w.clone(), kdim - rank));
                    count += kdim - rank;
                }
            }
            betti.set(i, j, count);
            // explicit generators for the new part
            let inner = if i == 0 { None } else { Some(self.target_layout(i - 1, j, t, zero)) };
            let new_gens: Vec<Generator<F::Elem>> = fresh
                .iter()
                .flat_map(|(w, n)| {
                    let elems = &target.blocks[w];
                    let candidates: Vec<SparseVec<F::Elem>> = match &inner {
                        None => (0..elems.len()).map(|k| vec![(k as u32, f.one())]).collect(),
                        Some(inner) => {
                            let rows: Vec<SparseVec<F::Elem>> =
                                elems.iter().map(|&(h, c)| self.apply(i - 1, h, c, j, t, inner)).collect();
                            left_kernel_sparse(f, inner.block_len(w), &rows)
                        }
                    };
                    let base = echelons.get(w).cloned().unwrap_or_else(|| Echelon::new(f.clone(), elems.len()));
                    let picked = complement_in(&base, &candidates);
                    assert_eq!(picked.len(), *n, "kernel complement has the wrong size");
                    picked
                        .into_iter()
                        .map(|v| Generator {
                            degree: j,
                            weight: w.clone(),
                            image: v
                                .into_iter()
                                .map(|(k, x)| {
                                    let (h, c) = elems[k as usize];
                                    (h, c, x)
                                })
                                .collect(),
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            self.gens[i].extend(new_gens);
            prev_kernel = kernel_dims;
        }
    }
}

/// Resolve a right module through homological degree `top` and internal
/// degree `j_max`.
pub fn minimal_resolution<F: Field>(module: &GradedModule<F>, top: usize, j_max: usize) -> Result<MinimalResolution<F>> {
    if module.side() != ModuleSide::Right {
        return Err(Error::InvalidPresentation("resolutions are built for right modules".into()));
    }
    let algebra = module.algebra().clone();
    let zero = Weight::zero(algebra.presentation().weight_len());
    let mut r = Resolver { field: module.field(), gens: vec![Vec::new(); top + 1] };
    let mut betti = TorTable::new(top, j_max);
    for j in 0..=j_max {
        let t = Tables::fetch(&algebra, module, j)?;
        r.degree(j, top, &t, &mut betti, &zero);
    }
    Ok(MinimalResolution { generators: r.gens, betti })
}

/// The module as a right module: left modules become right modules over
/// the opposite algebra.
fn as_right<F: Field>(m: &ModulePresentation<F>) -> Result<(Arc<QuadraticAlgebra<F>>, GradedModule<F>)> {
    let (p, pres) = match m.side() {
        ModuleSide::Right => (m.algebra().clone(), m.clone()),
        ModuleSide::Left => {
            let op = m.algebra().opposite();
            let (_, j) = m.right_oriented();
            let pres = ModulePresentation::new(op.clone(), ModuleSide::Right, m.m0_dim(), Some(m.m0_weights().to_vec()), j)?;
            (op, pres)
        }
    };
    let a = Arc::new(QuadraticAlgebra::new(p)?);
    let module = GradedModule::new(a.clone(), pres)?;
    Ok((a, module))
}

/// `Tor^A(k, k)` from a minimal resolution of the trivial module.
pub fn resolution_tor_table<F: Field>(p: &QuadraticPresentation<F>, i_max: usize, j_max: usize) -> Result<TorTable> {
    resolution_module_tor_table(&ModulePresentation::trivial(p.clone(), ModuleSide::Right), i_max, j_max)
}

/// `Tor^A(M, k)` for a right module, `Tor^A(k, M)` for a left one.
pub fn resolution_module_tor_table<F: Field>(m: &ModulePresentation<F>, i_max: usize, j_max: usize) -> Result<TorTable> {
    let (_, module) = as_right(m)?;
    Ok(minimal_resolution(&module, i_max, j_max)?.betti)
}

/// `Tor^A(M, N)` as the homology of `G ⊗ N` for a minimal resolution
/// `G ⊗ A` of the right module `M`.
pub fn resolution_pair_tor_table<F: Field>(
    m: &ModulePresentation<F>,
    n: &ModulePresentation<F>,
    i_max: usize,
    j_max: usize,
) -> Result<TorTable> {
    if m.side() != ModuleSide::Right || n.side() != ModuleSide::Left {
        return Err(Error::InvalidPresentation("pair Tor needs a right module and a left module".into()));
    }
    if m.algebra() != n.algebra() {
        return Err(Error::InvalidPresentation("modules are presented over different algebras".into()));
    }
    let a = Arc::new(QuadraticAlgebra::new(m.algebra().clone())?);
    let left = GradedModule::new(a.clone(), m.clone())?;
    let right = GradedModule::new(a.clone(), n.clone())?;
    let res = minimal_resolution(&left, i_max + 1, j_max)?;
    let f = a.field();
    let n_weights: Vec<Vec<Weight>> = (0..=j_max).map(|d| Ok(right.level(d)?.weights.clone())).collect::<Result<_>>()?;
    let n_dims: Vec<usize> = n_weights.iter().map(Vec::len).collect();
    let mut actions: HashMap<(usize, usize), ProductTable<F::Elem>> = HashMap::new();
    for x in 0..=j_max {
        for y in 0..=j_max - x {
            actions.insert((x, y), right.left_action(x, y)?);
        }
    }
    let layout = |i: usize, j: usize| {
        Layout::new(
            res.generators[i]
                .iter()
                .enumerate()
                .filter(|(_, h)| h.degree <= j)
                .map(|(k, h)| (k as u32, &h.weight, n_weights[j - h.degree].as_slice())),
        )
    };
    let mut table = TorTable::new(i_max, j_max);
    for j in 0..=j_max {
        let chains: Vec<Layout> = (0..=i_max + 1).map(|i| layout(i, j)).collect();
        // ranks[i][w] = rank of ∂_i : C_i → C_{i−1} on block w
        let mut ranks: Vec<HashMap<Weight, usize>> = vec![HashMap::new()];
        for i in 1..=i_max + 1 {
            let (src, dst) = (&chains[i], &chains[i - 1]);
            let gens = &res.generators[i];
            let lower = &res.generators[i - 1];
            let blocks: Vec<(&Weight, &Vec<(u32, u32)>)> = src.blocks.iter().collect();
            let r = par::map(&blocks, |(w, elems)| {
                let mut e = Echelon::new(f.clone(), dst.block_len(w));
                for &(h, v) in elems.iter() {
                    let gen = &gens[h as usize];
                    let nd = j - gen.degree;
                    let mut acc = SparseAccumulator::new(f);
                    for (hp, cp, coef) in &gen.image {
                        let a_deg = gen.degree - lower[*hp as usize].degree;
                        let t = &actions[&(a_deg, nd)];
                        for (x, y) in &t[*cp as usize * n_dims[nd] + v as usize] {
                            acc.push(dst.position[&(*hp, *x)], f.mul(coef, y));
                        }
                    }
                    e.insert(&acc.finish());
                }
                ((*w).clone(), e.rank())
            });
            ranks.push(r.into_iter().collect());
        }
        for i in 0..=i_max {
            let mut h = 0;
            for (w, elems) in &chains[i].blocks {
                let out = ranks[i].get(w).copied().unwrap_or(0);
                let inc = ranks[i + 1].get(w).copied().unwrap_or(0);
                h += elems.len() - out - inc;
            }
            table.set(i, j, h);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::koszul::bar::{bar_tor_table, module_tor_table, pair_tor_table};

    #[test]
    fn polynomial_ring_betti_numbers() {
        let p = QuadraticPresentation::polynomial_ring(Rationals, 3);
        let t = resolution_tor_table(&p, 4, 5).unwrap();
        assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![(0, 0, 1), (1, 1, 3), (2, 2, 3), (3, 3, 1)]);
    }

    #[test]
    fn agrees_with_bar_complex() {
        let f = PrimeField::new(32003).unwrap();
        let cases = [
            QuadraticPresentation::free(f, 2),
            QuadraticPresentation::monomial(f, 2, &[(0, 1), (1, 1)]).unwrap(),
            QuadraticPresentation::polynomial_ring(f, 2),
        ];
        for p in &cases {
            assert_eq!(resolution_tor_table(p, 3, 4).unwrap(), bar_tor_table(p, 3, 4).unwrap());
        }
    }

    #[test]
    fn left_modules_and_pairs() {
        let f = PrimeField::new(101).unwrap();
        let p = QuadraticPresentation::polynomial_ring(f, 2);
        let g = 2;
        let j = crate::linalg::Subspace::span(f, g, vec![vec![f.one(), f.zero()]]).unwrap();
        let right = ModulePresentation::new(p.clone(), ModuleSide::Right, 1, None, j.clone()).unwrap();
        let left = ModulePresentation::new(p.clone(), ModuleSide::Left, 1, None, j).unwrap();
        assert_eq!(resolution_module_tor_table(&right, 3, 4).unwrap(), module_tor_table(&p, &right, 3, 4).unwrap());
        assert_eq!(resolution_module_tor_table(&left, 3, 4).unwrap(), module_tor_table(&p, &left, 3, 4).unwrap());
        assert_eq!(
            resolution_pair_tor_table(&right, &left, 3, 4).unwrap(),
            pair_tor_table(&p, &right, &left, 3, 4).unwrap()
        );
    }
}
