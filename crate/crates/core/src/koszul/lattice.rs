//! Subspace lattices generated by relation spaces, and the distributivity
//! criterion for Koszulity.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::{checked_pow, ModulePresentation, QuadraticPresentation};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Subspace;
use crate::par;
use crate::weight::Weight;

/// Default closure cap.
pub const DEFAULT_CAP: usize = 4096;

/// Largest tensor space the lattice tests will lay out.
pub const LATTICE_AMBIENT_LIMIT: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Derivation {
    Generator(usize),
    Sum(usize, usize),
    Intersection(usize, usize),
}

/// The sum/intersection closure of a list of subspaces.
#[derive(Clone, Debug)]
pub struct LatticeClosure<F: Field> {
    ambient_dim: usize,
    elements: Vec<Subspace<F>>,
    derivation: Vec<Derivation>,
    generators: Vec<usize>,
    join: Vec<Vec<u32>>,
    meet: Vec<Vec<u32>>,
}

impl<F: Field> LatticeClosure<F> {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Subspace<F>] {
        &self.elements
    }

    pub fn derivation(&self) -> &[Derivation] {
        &self.derivation
    }

    /// Element index of each generator (repeats collapse to one element).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        self.join[hi][lo] as usize
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        self.meet[hi][lo] as usize
    }
}

/// Saturate `generators` under sum and intersection. Elements appear in
/// insertion order: generators first, then results as pairs `(i, j)`,
/// `j ≤ i`, are processed in increasing `i`.
pub fn lattice_closure<F: Field>(generators: &[Subspace<F>], cap: usize) -> Result<LatticeClosure<F>> {
    if cap == 0 {
        return Err(Error::OutOfRange("closure cap must be at least 1".into()));
    }
    let Some(first) = generators.first() else {
        return Err(Error::OutOfRange("lattice closure needs at least one generator".into()));
    };
    let ambient_dim = first.ambient_dim();
    let mut elements: Vec<Subspace<F>> = Vec::new();
    let mut derivation = Vec::new();
    let mut index: HashMap<Subspace<F>, u32> = HashMap::new();
    let mut gens = Vec::new();
    let overflow = || Error::CapExceeded { degree: 0, cap };

    let mut insert = |s: Subspace<F>,
                      how: Derivation,
                      elements: &mut Vec<Subspace<F>>,
                      derivation: &mut Vec<Derivation>|
     -> Result<u32> {
        if let Some(&i) = index.get(&s) {
            return Ok(i);
        }
        if elements.len() == cap {
            return Err(overflow());
        }
        let i = elements.len() as u32;
        index.insert(s.clone(), i);
        elements.push(s);
        derivation.push(how);
        Ok(i)
    };

    for (k, g) in generators.iter().enumerate() {
        if g.ambient_dim() != ambient_dim {
            return Err(Error::AmbientMismatch(ambient_dim, g.ambient_dim()));
        }
        if g.field() != first.field() {
            return Err(Error::FieldMismatch(first.field().spec().to_string(), g.field().spec().to_string()));
        }
        let i = insert(g.clone(), Derivation::Generator(k), &mut elements, &mut derivation)?;
        gens.push(i as usize);
    }

    let mut join: Vec<Vec<u32>> = Vec::new();
    let mut meet: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut jrow = Vec::with_capacity(i + 1);
        let mut mrow = Vec::with_capacity(i + 1);
        for j in 0..=i {
            let (s, m) = if i == j {
                (i as u32, i as u32)
            } else {
                let sum = elements[i].sum(&elements[j])?;
                let s = insert(sum, Derivation::Sum(i, j), &mut elements, &mut derivation)?;
                let int = elements[i].intersect(&elements[j])?;
                let m = insert(int, Derivation::Intersection(i, j), &mut elements, &mut derivation)?;
                (s, m)
            };
            jrow.push(s);
            mrow.push(m);
        }
        join.push(jrow);
        meet.push(mrow);
        i += 1;
    }
    Ok(LatticeClosure { ambient_dim, elements, derivation, generators: gens, join, meet })
}

/// A triple with `x ∩ (y + z) ≠ x ∩ y + x ∩ z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<F: Field> {
    pub indices: (usize, usize, usize),
    pub x: Subspace<F>,
    pub y: Subspace<F>,
    pub z: Subspace<F>,
}

impl<F: Field> Witness<F> {
    /// Recompute both sides with direct subspace arithmetic.
    pub fn sides(&self) -> Result<(Subspace<F>, Subspace<F>)> {
        let lhs = self.x.intersect(&self.y.sum(&self.z)?)?;
        let rhs = self.x.intersect(&self.y)?.sum(&self.x.intersect(&self.z)?)?;
        Ok((lhs, rhs))
    }

    pub fn recheck(&self) -> Result<bool> {
        let (l, r) = self.sides()?;
        Ok(l != r)
    }
}

#[derive(Clone, Debug)]
pub struct DistributivityVerdict<F: Field> {
    pub distributive: bool,
    pub witness: Option<Witness<F>>,
}

/// Scan all triples in index order; the first failure is the witness.
pub fn is_distributive<F: Field>(c: &LatticeClosure<F>) -> DistributivityVerdict<F> {
    let n = c.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = c.meet(x, c.join(y, z));
                let rhs = c.join(c.meet(x, y), c.meet(x, z));
                if lhs != rhs {
                    let e = &c.elements;
                    return DistributivityVerdict {
                        distributive: false,
                        witness: Some(Witness {
                            indices: (x, y, z),
                            x: e[x].clone(),
                            y: e[y].clone(),
                            z: e[z].clone(),
                        }),
                    };
                }
            }
        }
    }
    DistributivityVerdict { distributive: true, witness: None }
}

/// Witness localized to one weight block of the tensor space.
#[derive(Clone, Debug)]
pub struct BlockWitness<F: Field> {
    pub weight: Weight,
    /// Global tensor coordinates of the block's local columns.
    pub coordinates: Vec<u64>,
    pub witness: Witness<F>,
}

#[derive(Clone, Debug)]
pub struct DegreeVerdict<F: Field> {
    pub degree: usize,
    pub distributive: bool,
    pub blocks: usize,
    pub max_closure: usize,
    pub total_closure: usize,
    pub witness: Option<BlockWitness<F>>,
}

/// Tensor data in right orientation: relations `R ⊆ V⊗V`, `J ⊆ M_0⊗V`.
struct LatticeInput<'a, F: Field> {
    g: usize,
    letter_weights: &'a [Weight],
    base_weights: Vec<Weight>,
    relations: Subspace<F>,
    j: Option<Subspace<F>>,
}

fn word_weights(letters: &[Weight], len: usize, wlen: usize) -> Vec<Weight> {
    let mut out = vec![Weight::zero(wlen)];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for w in &out {
            for l in letters {
                next.push(w.add(l));
            }
        }
        out = next;
    }
    out
}

fn sparse_rows<F: Field>(s: &Subspace<F>) -> Vec<Vec<(usize, F::Elem)>> {
    let f = s.field();
    (0..s.dim())
        .map(|r| {
            s.basis()
                .row(r)
                .iter()
                .enumerate()
                .filter(|(_, x)| !f.is_zero(x))
                .map(|(c, x)| (c, x.clone()))
                .collect()
        })
        .collect()
}

/// Rows of the generator family in degree `n`, tagged with their weight.
/// Family 0 is `J ⊗ V^{⊗n−1}` when present; the others are the relation
/// positions `k = 1..n−1`.
fn family_rows<F: Field>(
    input: &LatticeInput<'_, F>,
    n: usize,
) -> Result<(Vec<Weight>, Vec<Vec<(Weight, Vec<(usize, F::Elem)>)>>)> {
    let g = input.g;
    let wlen = input.base_weights.first().map_or(0, Weight::len);
    let m0 = input.base_weights.len();
    let gn = checked_pow(g, n)?;
    if gn.saturating_mul(m0) > LATTICE_AMBIENT_LIMIT {
        return Err(Error::LimitExceeded(format!("lattice ambient {} in degree {n}", gn * m0)));
    }
    let words_n = word_weights(input.letter_weights, n, wlen);
    let coord_weights: Vec<Weight> = (0..m0 * gn).map(|c| input.base_weights[c / gn].add(&words_n[c % gn])).collect();
    let rel = sparse_rows(&input.relations);
    let mut families = Vec::new();
    if let Some(j) = &input.j {
        let tail = checked_pow(g, n - 1)?;
        let mut rows = Vec::new();
        for r in sparse_rows(j) {
            for s in 0..tail {
                let v: Vec<(usize, F::Elem)> = r.iter().map(|(c, x)| (c * tail + s, x.clone())).collect();
                rows.push((coord_weights[v[0].0].clone(), v));
            }
        }
        families.push(rows);
    }
    for k in 1..n {
        let head = checked_pow(g, k - 1)?;
        let tail = checked_pow(g, n - k - 1)?;
        let mut rows = Vec::new();
        for b in 0..m0 {
            for a in 0..head {
                for r in &rel {
                    for s in 0..tail {
                        let v: Vec<(usize, F::Elem)> = r
                            .iter()
                            .map(|(c, x)| (b * gn + (a * g * g + c) * tail + s, x.clone()))
                            .collect();
                        rows.push((coord_weights[v[0].0].clone(), v));
                    }
                }
            }
        }
        families.push(rows);
    }
    Ok((coord_weights, families))
}

fn degree_verdict<F: Field>(
    field: &F,
    input: &LatticeInput<'_, F>,
    n: usize,
    cap: usize,
) -> Result<DegreeVerdict<F>> {
    let (coord_weights, families) = family_rows(input, n)?;
    // group coordinates and family rows by weight
    let mut coords: BTreeMap<&Weight, Vec<usize>> = BTreeMap::new();
    for (c, w) in coord_weights.iter().enumerate() {
        coords.entry(w).or_default().push(c);
    }
    let mut per_block: BTreeMap<Weight, Vec<Vec<Vec<(usize, F::Elem)>>>> = BTreeMap::new();
    for (fi, fam) in families.iter().enumerate() {
        for (w, v) in fam {
            let slot = per_block.entry(w.clone()).or_insert_with(|| vec![Vec::new(); families.len()]);
            slot[fi].push(v.clone());
        }
    }
    let blocks: Vec<(Weight, Vec<Vec<Vec<(usize, F::Elem)>>>)> = per_block.into_iter().collect();
    let results = par::map(&blocks, |(w, fams)| -> Result<(usize, Option<BlockWitness<F>>)> {
        let cols = &coords[w];
        let local = |c: usize| cols.binary_search(&c).expect("row stays in its weight block");
        let mut gens = Vec::with_capacity(fams.len());
        for rows in fams {
            let dense: Vec<Vec<F::Elem>> = rows
                .iter()
                .map(|r| {
                    let mut v = vec![field.zero(); cols.len()];
                    for (c, x) in r {
                        v[local(*c)] = x.clone();
                    }
                    v
                })
                .collect();
            gens.push(Subspace::span(field.clone(), cols.len(), dense)?);
        }
        let closure = lattice_closure(&gens, cap).map_err(|e| match e {
            Error::CapExceeded { cap, .. } => Error::CapExceeded { degree: n, cap },
            other => other,
        })?;
        let verdict = is_distributive(&closure);
        let witness = verdict.witness.map(|witness| BlockWitness {
            weight: w.clone(),
            coordinates: cols.iter().map(|&c| c as u64).collect(),
            witness,
        });
        Ok((closure.len(), witness))
    });
    let mut out = DegreeVerdict {
        degree: n,
        distributive: true,
        blocks: blocks.len(),
        max_closure: 0,
        total_closure: 0,
        witness: None,
    };
    for r in results {
        let (size, witness) = r?;
        out.max_closure = out.max_closure.max(size);
        out.total_closure += size;
        if witness.is_some() && out.witness.is_none() {
            out.distributive = false;
            out.witness = witness;
        }
    }
    Ok(out)
}

/// Distributivity of the lattice generated by `W_1, …, W_{n−1}` in
/// `V^{⊗n}` for each `2 ≤ n ≤ n_max`.
pub fn koszul_lattice_test<F: Field>(
    p: &QuadraticPresentation<F>,
    n_max: usize,
    cap: usize,
) -> Result<Vec<DegreeVerdict<F>>> {
    if n_max < 2 {
        return Err(Error::OutOfRange(format!("lattice test needs n_max ≥ 2, got {n_max}")));
    }
    let input = LatticeInput {
        g: p.num_generators(),
        letter_weights: p.weights(),
        base_weights: vec![Weight::zero(p.weight_len())],
        relations: p.relations().clone(),
        j: None,
    };
    (2..=n_max).map(|n| degree_verdict(p.field(), &input, n, cap)).collect()
}

/// The module version: generators `J ⊗ V^{⊗n−1}` and
/// `M_0 ⊗ V^{⊗k−1} ⊗ R ⊗ V^{⊗n−k−1}` inside `M_0 ⊗ V^{⊗n}`. Left modules
/// are tested in the mirrored orientation.
pub fn koszul_module_lattice_test<F: Field>(
    m: &ModulePresentation<F>,
    n_max: usize,
    cap: usize,
) -> Result<Vec<DegreeVerdict<F>>> {
    if n_max < 2 {
        return Err(Error::OutOfRange(format!("lattice test needs n_max ≥ 2, got {n_max}")));
    }
    let (relations, j) = m.right_oriented();
    let input = LatticeInput {
        g: m.algebra().num_generators(),
        letter_weights: m.algebra().weights(),
        base_weights: m.m0_weights().to_vec(),
        relations,
        j: Some(j),
    };
    (2..=n_max).map(|n| degree_verdict(m.algebra().field(), &input, n, cap)).collect()
}
