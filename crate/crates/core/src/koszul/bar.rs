//! Two-sided bar complexes `L ⊗ Ā^{⊗i} ⊗ N` and their homology.
//!
//! With `L` a right and `N` a left module, the complex
//! `d = Σ_{l=0}^{i} (−1)^l ∂_l` (∂_0 acts on `L`, ∂_i on `N`, the others
//! multiply neighbouring bar factors) computes `Tor^A(L, N)`. Everything
//! splits by internal degree and weight, and ranks are taken per block.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::algebra::{GradedModule, ModulePresentation, ModuleSide, QuadraticAlgebra, QuadraticPresentation};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, SparseAccumulator, SparseVec};
use crate::par;
use crate::weight::Weight;

use super::tor::TorTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BarLimits {
    /// Largest weight block of one chain group.
    pub max_block: usize,
    /// Largest chain group at one bidegree.
    pub max_total: usize,
}

impl Default for BarLimits {
    fn default() -> Self {
        Self { max_block: 6000, max_total: 3_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    /// Face `l` of `B_i` carries `(−1)^l`.
    #[default]
    Standard,
    /// Face `l` of `B_i` carries `(−1)^{i−l}`.
    Reversed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BarOptions {
    pub limits: BarLimits,
    pub signs: SignConvention,
}

/// Homology together with the number of bidegrees where `d∘d = 0` was
/// confirmed.
#[derive(Clone, Debug)]
pub struct BarResult {
    pub table: TorTable,
    pub d_squared_checked: usize,
    pub largest_block: usize,
}

/// Chain group `B_{i,j}`: elements grouped by weight. An element is
/// `[composition id, basis index per slot...]`.
struct ChainGroup {
    comps: Vec<Vec<usize>>,
    comp_ids: HashMap<Vec<usize>, u32>,
    blocks: BTreeMap<Weight, Vec<Vec<u32>>>,
    position: HashMap<Vec<u32>, (u32, u32)>,
}

impl ChainGroup {
    fn total(&self) -> usize {
        self.position.len()
    }
}

/// Degree vectors `(a_0, j_1, …, j_i, b)` with `j_l ≥ 1` summing to `j`.
fn compositions(i: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(slots_left: usize, remaining: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots_left == 0 {
            // last slot takes the rest (N degree)
            cur.push(remaining);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for d in 1..=remaining {
            if remaining - d + 1 < slots_left {
                break;
            }
            cur.push(d);
            rec(slots_left - 1, remaining - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for a0 in 0..=j {
        if j - a0 < i {
            break;
        }
        let mut cur = vec![a0];
        rec(i, j - a0, &mut cur, &mut out);
    }
    out
}

struct Bar<'a, F: Field> {
    algebra: &'a QuadraticAlgebra<F>,
    left: &'a GradedModule<F>,
    right: &'a GradedModule<F>,
    options: BarOptions,
}

impl<'a, F: Field> Bar<'a, F> {
    fn slot_dim(&self, slot: usize, slots: usize, deg: usize) -> Result<usize> {
        if slot == 0 {
            self.left.dim(deg)
        } else if slot == slots - 1 {
            self.right.dim(deg)
        } else {
            self.algebra.dim(deg)
        }
    }

    fn slot_weights(&self, slot: usize, slots: usize, deg: usize) -> Result<Vec<Weight>> {
        let level = if slot == 0 {
            self.left.level(deg)?
        } else if slot == slots - 1 {
            self.right.level(deg)?
        } else {
            self.algebra.level(deg)?
        };
        Ok(level.weights.clone())
    }

    fn chain_group(&self, i: usize, j: usize) -> Result<ChainGroup> {
        let slots = i + 2;
        let mut comps = Vec::new();
        let mut total = 0usize;
        for c in compositions(i, j) {
            let mut size = 1usize;
            for (s, &d) in c.iter().enumerate() {
                size = size.saturating_mul(self.slot_dim(s, slots, d)?);
            }
            if size > 0 {
                total = total.saturating_add(size);
                comps.push(c);
            }
        }
        if total > self.options.limits.max_total {
            return Err(Error::DegreeOverflow(format!(
                "bar group B_{{{i},{j}}} has {total} elements (limit {})",
                self.options.limits.max_total
            )));
        }
        let mut blocks: BTreeMap<Weight, Vec<Vec<u32>>> = BTreeMap::new();
        let mut comp_ids = HashMap::new();
        for (id, c) in comps.iter().enumerate() {
            comp_ids.insert(c.clone(), id as u32);
            let weights: Vec<Vec<Weight>> =
                c.iter().enumerate().map(|(s, &d)| self.slot_weights(s, slots, d)).collect::<Result<_>>()?;
            let dims: Vec<usize> = weights.iter().map(Vec::len).collect();
            let mut idx = vec![0usize; slots];
            loop {
                let mut w = weights[0][idx[0]].clone();
                for s in 1..slots {
                    w.add_assign(&weights[s][idx[s]]);
                }
                let mut key = Vec::with_capacity(slots + 1);
                key.push(id as u32);
                key.extend(idx.iter().map(|&x| x as u32));
                blocks.entry(w).or_default().push(key);
                // odometer, last slot fastest
                let mut s = slots;
                loop {
                    if s == 0 {
                        break;
                    }
                    s -= 1;
                    idx[s] += 1;
                    if idx[s] < dims[s] {
                        break;
                    }
                    idx[s] = 0;
                    if s == 0 {
                        s = usize::MAX;
                        break;
                    }
                }
                if s == usize::MAX {
                    break;
                }
            }
        }
        let mut position = HashMap::with_capacity(total);
        for (b, (_, elems)) in blocks.iter().enumerate() {
            if elems.len() > self.options.limits.max_block {
                return Err(Error::DegreeOverflow(format!(
                    "bar group B_{{{i},{j}}} has a weight block of {} elements (limit {})",
                    elems.len(),
                    self.options.limits.max_block
                )));
            }
            for (k, e) in elems.iter().enumerate() {
                position.insert(e.clone(), (b as u32, k as u32));
            }
        }
        Ok(ChainGroup { comps, comp_ids, blocks, position })
    }

    fn sign(&self, i: usize, l: usize) -> bool {
        // true means negative
        match self.options.signs {
            SignConvention::Standard => l % 2 == 1,
            SignConvention::Reversed => (i - l) % 2 == 1,
        }
    }

    /// `d(e)` for `e ∈ B_i`, as local coordinates in the same block of
    /// `B_{i−1}`.
    fn differential(&self, i: usize, src: &ChainGroup, dst: &ChainGroup, e: &[u32]) -> Result<SparseVec<F::Elem>> {
        let f = self.algebra.field();
        let comp = &src.comps[e[0] as usize];
        let idx = &e[1..];
        let mut acc = SparseAccumulator::new(f);
        let mut emit = |l: usize, table: &[SparseVec<F::Elem>], row: usize, merged_deg: usize, merged_slot: usize| {
            let mut new_comp = Vec::with_capacity(comp.len() - 1);
            new_comp.extend_from_slice(&comp[..merged_slot]);
            new_comp.push(merged_deg);
            new_comp.extend_from_slice(&comp[merged_slot + 2..]);
            let Some(&cid) = dst.comp_ids.get(&new_comp) else {
                debug_assert!(table[row].is_empty());
                return;
            };
            let negative = self.sign(i, l);
            for (t, c) in &table[row] {
                let mut key = Vec::with_capacity(idx.len());
                key.push(cid);
                key.extend_from_slice(&idx[..merged_slot]);
                key.push(*t);
                key.extend_from_slice(&idx[merged_slot + 2..]);
                let (_, local) = dst.position[&key];
                acc.push(local, if negative { f.neg(c) } else { c.clone() });
            }
        };
        let last = i + 1;
        for l in 0..=i {
            let (a, b) = (comp[l], comp[l + 1]);
            let (u, v) = (idx[l] as usize, idx[l + 1] as usize);
            if l == 0 {
                let t = self.left.right_action(a, b)?;
                let db = self.algebra.dim(b)?;
                emit(l, &t, u * db + v, a + b, 0);
            } else if l + 1 == last {
                let t = self.right.left_action(a, b)?;
                let nb = self.right.dim(b)?;
                emit(l, &t, u * nb + v, a + b, l);
            } else {
                let t = self.algebra.product_table(a, b)?;
                let db = self.algebra.dim(b)?;
                emit(l, &t, u * db + v, a + b, l);
            }
        }
        Ok(acc.finish())
    }

    /// Rows of `d_i` per block of `B_i` (local coordinates of `B_{i−1}`).
    fn differential_rows(&self, i: usize, src: &ChainGroup, dst: &ChainGroup) -> Result<Vec<Vec<SparseVec<F::Elem>>>> {
        let blocks: Vec<&Vec<Vec<u32>>> = src.blocks.values().collect();
        par::map(&blocks, |elems| elems.iter().map(|e| self.differential(i, src, dst, e)).collect::<Result<Vec<_>>>())
            .into_iter()
            .collect()
    }

    fn run(&self, i_max: usize, j_max: usize) -> Result<BarResult> {
        let f = self.algebra.field();
        let mut table = TorTable::new(i_max, j_max);
        let mut checked = 0;
        let mut largest = 0;
        for j in 0..=j_max {
            let top = (i_max + 1).min(j.max(1));
            let groups: Vec<ChainGroup> = (0..=top).map(|i| self.chain_group(i, j)).collect::<Result<_>>()?;
            for g in &groups {
                largest = largest.max(g.blocks.values().map(Vec::len).max().unwrap_or(0));
            }
            // rows[i] = d_i : B_i → B_{i−1}, per block of B_i
            let mut rows: Vec<Vec<Vec<SparseVec<F::Elem>>>> = vec![Vec::new()];
            for i in 1..=top {
                rows.push(self.differential_rows(i, &groups[i], &groups[i - 1])?);
            }
            // ranks[i][w] with blocks identified by weight
            let mut ranks: Vec<HashMap<&Weight, usize>> = vec![HashMap::new()];
            for i in 1..=top {
                let target = &groups[i - 1];
                let keyed: Vec<(&Weight, &Vec<SparseVec<F::Elem>>)> =
                    groups[i].blocks.keys().zip(rows[i].iter()).collect();
                let rk = par::map(&keyed, |(w, block_rows)| {
                    let width = target.blocks.get(*w).map_or(0, Vec::len);
                    let mut ech = Echelon::new(f.clone(), width);
                    for r in block_rows.iter() {
                        ech.insert(r);
                    }
                    ech.rank()
                });
                ranks.push(keyed.iter().map(|(w, _)| *w).zip(rk).collect());
            }
            // d_{i} ∘ d_{i+1} = 0, block by block
            for i in 1..top {
                let lower = &groups[i];
                for (w, upper_rows) in groups[i + 1].blocks.keys().zip(rows[i + 1].iter()) {
                    let b = lower.blocks.keys().position(|k| k == w);
                    for r in upper_rows {
                        let mut acc = SparseAccumulator::new(f);
                        if let Some(b) = b {
                            for (local, c) in r {
                                acc.add_scaled(c, &rows[i][b][*local as usize]);
                            }
                        } else {
                            assert!(r.is_empty(), "differential left its weight block");
                        }
                        assert!(acc.finish().is_empty(), "d∘d ≠ 0 in bar degree {} internal degree {j}", i + 1);
                    }
                }
                checked += 1;
            }
            for i in 0..=i_max.min(top) {
                let mut h = 0usize;
                for (w, elems) in &groups[i].blocks {
                    let out_rank = ranks[i].get(w).copied().unwrap_or(0);
                    let in_rank = ranks.get(i + 1).and_then(|r| r.get(w)).copied().unwrap_or(0);
                    h += elems.len() - out_rank - in_rank;
                }
                table.set(i, j, h);
            }
            debug_assert!(groups.iter().all(|g| g.total() == g.position.len()));
        }
        Ok(BarResult { table, d_squared_checked: checked, largest_block: largest })
    }
}

/// `Tor^A(L, N)` from the two-sided bar complex; `left` is a right module
/// and `right` a left module over `algebra`.
pub fn bar_homology<F: Field>(
    algebra: &QuadraticAlgebra<F>,
    left: &GradedModule<F>,
    right: &GradedModule<F>,
    i_max: usize,
    j_max: usize,
    options: BarOptions,
) -> Result<BarResult> {
    if left.side() != ModuleSide::Right || right.side() != ModuleSide::Left {
        return Err(Error::InvalidPresentation("bar complex needs a right module on the left and a left module on the right".into()));
    }
    if left.algebra().presentation() != algebra.presentation() || right.algebra().presentation() != algebra.presentation() {
        return Err(Error::InvalidPresentation("modules are presented over a different algebra".into()));
    }
    Bar { algebra, left, right, options }.run(i_max, j_max)
}

pub(crate) fn trivial<F: Field>(a: &Arc<QuadraticAlgebra<F>>, side: ModuleSide) -> Result<GradedModule<F>> {
    GradedModule::new(a.clone(), ModulePresentation::trivial(a.presentation().clone(), side))
}

/// `Tor^A(k, k)`.
pub fn bar_tor_table<F: Field>(p: &QuadraticPresentation<F>, i_max: usize, j_max: usize) -> Result<TorTable> {
    let a = Arc::new(QuadraticAlgebra::new(p.clone())?);
    let l = trivial(&a, ModuleSide::Right)?;
    let r = trivial(&a, ModuleSide::Left)?;
    Ok(bar_homology(&a, &l, &r, i_max, j_max, BarOptions::default())?.table)
}

/// `Tor^A(M, k)` for a right module `M` (`Tor^A(k, M)` for a left one).
pub fn module_tor_table<F: Field>(
    p: &QuadraticPresentation<F>,
    m: &ModulePresentation<F>,
    i_max: usize,
    j_max: usize,
) -> Result<TorTable> {
    let a = Arc::new(QuadraticAlgebra::new(p.clone())?);
    let module = GradedModule::new(a.clone(), m.clone())?;
    let result = match m.side() {
        ModuleSide::Right => bar_homology(&a, &module, &trivial(&a, ModuleSide::Left)?, i_max, j_max, BarOptions::default()),
        ModuleSide::Left => bar_homology(&a, &trivial(&a, ModuleSide::Right)?, &module, i_max, j_max, BarOptions::default()),
    };
    Ok(result?.table)
}

/// `Tor^A(M, N)` for a right module `M` and a left module `N`.
pub fn pair_tor_table<F: Field>(
    p: &QuadraticPresentation<F>,
    m: &ModulePresentation<F>,
    n: &ModulePresentation<F>,
    i_max: usize,
    j_max: usize,
) -> Result<TorTable> {
    let a = Arc::new(QuadraticAlgebra::new(p.clone())?);
    let l = GradedModule::new(a.clone(), m.clone())?;
    let r = GradedModule::new(a.clone(), n.clone())?;
    Ok(bar_homology(&a, &l, &r, i_max, j_max, BarOptions::default())?.table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(0, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(2, 2), vec![vec![0, 1, 1, 0]]);
        assert!(compositions(3, 2).is_empty());
    }

    #[test]
    fn free_on_one_generator() {
        let p = QuadraticPresentation::free(Rationals, 1);
        let t = bar_tor_table(&p, 3, 4).unwrap();
        assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![(0, 0, 1), (1, 1, 1)]);
    }

    #[test]
    fn commutative_plane() {
        let p = QuadraticPresentation::polynomial_ring(Rationals, 2);
        let t = bar_tor_table(&p, 3, 4).unwrap();
        assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![(0, 0, 1), (1, 1, 2), (2, 2, 1)]);
    }

    #[test]
    fn exterior_point_is_koszul_with_full_diagonal() {
        let f = PrimeField::new(3).unwrap();
        let p = QuadraticPresentation::monomial(f, 1, &[(0, 0)]).unwrap();
        let t = bar_tor_table(&p, 4, 4).unwrap();
        assert_eq!(t.diagonal(), vec![1, 1, 1, 1, 1]);
        assert!(t.is_diagonal(0));
    }

    #[test]
    fn sign_conventions_agree() {
        let f = PrimeField::new(32003).unwrap();
        let p = QuadraticPresentation::polynomial_ring(f, 3);
        let a = Arc::new(QuadraticAlgebra::new(p).unwrap());
        let l = trivial(&a, ModuleSide::Right).unwrap();
        let r = trivial(&a, ModuleSide::Left).unwrap();
        let s = bar_homology(&a, &l, &r, 3, 3, BarOptions::default()).unwrap();
        let opts = BarOptions { signs: SignConvention::Reversed, ..BarOptions::default() };
        let t = bar_homology(&a, &l, &r, 3, 3, opts).unwrap();
        assert_eq!(s.table, t.table);
        assert!(s.d_squared_checked > 0);
    }

    #[test]
    fn free_module_and_trivial_module() {
        let p = QuadraticPresentation::polynomial_ring(Rationals, 2);
        let free = ModulePresentation::free(p.clone(), ModuleSide::Right, 1);
        let t = module_tor_table(&p, &free, 3, 3).unwrap();
        assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![(0, 0, 1)]);
        let k = ModulePresentation::trivial(p.clone(), ModuleSide::Right);
        assert_eq!(module_tor_table(&p, &k, 3, 3).unwrap(), bar_tor_table(&p, 3, 3).unwrap());
        let kl = ModulePresentation::trivial(p.clone(), ModuleSide::Left);
        assert_eq!(pair_tor_table(&p, &k, &kl, 3, 3).unwrap(), bar_tor_table(&p, 3, 3).unwrap());
    }
}
