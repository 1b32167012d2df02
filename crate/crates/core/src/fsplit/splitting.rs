//! The Cartier operator, splittings `f ↦ Φ(σ^{p−1} f)`, and compatibility
//! with ideals decided by linear algebra on bounded-degree pieces.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{left_kernel_sparse, Echelon, SparseAccumulator, SparseVec};
use crate::par;

use super::poly::{monomials_up_to, CharPPolynomial, Exponents};

/// `Φ`: keep the terms whose exponents are all `≡ p−1 (mod p)` and map
/// `x^e` to `x^{(e−(p−1))/p}`. Coefficients are fixed since `c^p = c`.
pub fn cartier_phi(f: &CharPPolynomial) -> CharPPolynomial {
    let p = f.characteristic();
    let terms = f.terms().iter().filter(|(e, _)| e.iter().all(|x| x % p == p - 1)).map(|(e, c)| {
        let e: Exponents = e.iter().map(|x| (x - (p - 1)) / p).collect();
        (e, *c)
    });
    CharPPolynomial::from_terms(f.field(), f.vars(), terms)
}

/// The map `s(f) = Φ(σ^{p−1} f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingCandidate {
    sigma: CharPPolynomial,
    kernel: CharPPolynomial,
}

impl SplittingCandidate {
    pub fn new(sigma: CharPPolynomial) -> Result<Self> {
        if sigma.is_zero() {
            return Err(Error::OutOfRange("σ must be nonzero".into()));
        }
        let kernel = sigma.pow(sigma.characteristic() - 1);
        Ok(Self { sigma, kernel })
    }

    pub fn sigma(&self) -> &CharPPolynomial {
        &self.sigma
    }

    pub fn characteristic(&self) -> u32 {
        self.sigma.characteristic()
    }

    /// `σ^{p−1}`.
    pub fn section(&self) -> &CharPPolynomial {
        &self.kernel
    }

    pub fn vars(&self) -> &[String] {
        self.sigma.vars()
    }
}

/// `s ∘ F = id`, which reduces to `Φ(σ^{p−1}) = 1`.
pub fn is_splitting(c: &SplittingCandidate) -> bool {
    cartier_phi(&c.kernel).is_one()
}

pub fn split_apply(c: &SplittingCandidate, f: &CharPPolynomial) -> Result<CharPPolynomial> {
    c.sigma.same_ring(f)?;
    Ok(cartier_phi(&c.kernel.mul(f)))
}

/// First monomial `f` of degree `≤ bound` with `s(f^p) ≠ f`.
pub fn frobenius_section_check(c: &SplittingCandidate, bound: u32) -> Option<Exponents> {
    let f = c.sigma.field();
    let vars = c.vars();
    let monos = monomials_up_to(vars.len(), bound);
    let bad = par::map(&monos, |e| {
        let m = CharPPolynomial::monomial(f, vars, e.clone(), 1);
        cartier_phi(&c.kernel.mul(&m.frobenius())) != m
    });
    monos.into_iter().zip(bad).find(|(_, b)| *b).map(|(e, _)| e)
}

/// An ideal on a chart, by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartIdeal {
    pub label: String,
    pub generators: Vec<CharPPolynomial>,
}

impl ChartIdeal {
    pub fn new(label: impl Into<String>, generators: Vec<CharPPolynomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::OutOfRange("an ideal needs at least one generator".into()));
        }
        for g in &generators[1..] {
            generators[0].same_ring(g)?;
        }
        Ok(Self { label: label.into(), generators })
    }

    /// `I + J`: the concatenated generator lists.
    pub fn sum(&self, other: &ChartIdeal) -> Result<ChartIdeal> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        ChartIdeal::new(format!("{} + {}", self.label, other.label), gens)
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, &CharPPolynomial)> {
        self.generators.iter().enumerate().filter(|(_, g)| !g.is_zero())
    }

    fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| {
            let mut degs = g.terms().keys().map(|e| e.iter().sum::<u32>());
            match degs.next() {
                Some(d) => degs.all(|x| x == d),
                None => true,
            }
        })
    }

    fn min_degree(&self) -> Option<u32> {
        self.nonzero().filter_map(|(_, g)| g.degree()).min()
    }
}

/// Polynomials of degree `≤ D` as coordinate vectors, split into blocks by
/// total degree when the ideals involved are homogeneous.
struct Coordinates {
    /// block and local index of each monomial
    index: HashMap<Exponents, (usize, u32)>,
    block_sizes: Vec<usize>,
    degree: u32,
}

impl Coordinates {
    fn new(nvars: usize, degree: u32, graded: bool) -> Self {
        let mut index = HashMap::new();
        let mut block_sizes = vec![0usize; if graded { degree as usize + 1 } else { 1 }];
        for e in monomials_up_to(nvars, degree) {
            let b = if graded { e.iter().sum::<u32>() as usize } else { 0 };
            index.insert(e, (b, block_sizes[b] as u32));
            block_sizes[b] += 1;
        }
        Self { index, block_sizes, degree }
    }

    /// Per-block sparse vectors; `None` if `f` has degree above the bound.
    fn split(&self, f: &CharPPolynomial) -> Option<Vec<SparseVec<u32>>> {
        let mut out = vec![Vec::new(); self.block_sizes.len()];
        for (e, c) in f.terms() {
            let (b, k) = *self.index.get(e)?;
            out[b].push((k, *c));
        }
        for v in &mut out {
            v.sort_unstable_by_key(|t| t.0);
        }
        Some(out)
    }

    fn polynomial(&self, field: PrimeField, vars: &[String], block: usize, v: &[(u32, u32)]) -> CharPPolynomial {
        let mut by_local: BTreeMap<u32, &Exponents> = BTreeMap::new();
        for (e, (b, k)) in &self.index {
            if *b == block {
                by_local.insert(*k, e);
            }
        }
        CharPPolynomial::from_terms(field, vars, v.iter().map(|(k, c)| (by_local[k].clone(), *c)))
    }
}

/// The span of `h·g` with `deg(h·g) ≤ D`, one echelon per block.
struct Truncation {
    blocks: Vec<Echelon<PrimeField>>,
}

impl Truncation {
    fn of_ideal(coords: &Coordinates, field: PrimeField, ideal: &ChartIdeal) -> Self {
        let mut blocks: Vec<Echelon<PrimeField>> =
            coords.block_sizes.iter().map(|&n| Echelon::new(field, n)).collect();
        let nvars = ideal.generators[0].vars().len();
        for (_, g) in ideal.nonzero() {
            let dg = g.degree().expect("nonzero");
            if dg > coords.degree {
                continue;
            }
            for h in monomials_up_to(nvars, coords.degree - dg) {
                let parts = coords.split(&g.mul_monomial(&h)).expect("within the bound");
                for (b, v) in parts.into_iter().enumerate() {
                    if !v.is_empty() {
                        blocks[b].insert(&v);
                    }
                }
            }
        }
        Self { blocks }
    }

    fn contains(&self, coords: &Coordinates, f: &CharPPolynomial) -> bool {
        match coords.split(f) {
            Some(parts) => parts.iter().zip(&self.blocks).all(|(v, e)| v.is_empty() || e.contains(v)),
            None => false,
        }
    }

    fn dim(&self) -> usize {
        self.blocks.iter().map(Echelon::rank).sum()
    }

    /// `I_{≤D} ∩ J_{≤D}`, blockwise: kernel of `J → k^N / I`.
    fn intersect(&self, other: &Truncation, field: PrimeField) -> Truncation {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                let residues: Vec<SparseVec<u32>> = b.rows().iter().map(|r| a.reduce(r)).collect();
                let mut e = Echelon::new(field, a.cols());
                for c in left_kernel_sparse(&field, a.cols(), &residues) {
                    let mut acc = SparseAccumulator::new(&field);
                    for (k, x) in &c {
                        acc.add_scaled(x, &b.rows()[*k as usize]);
                    }
                    e.insert(&acc.finish());
                }
                e
            })
            .collect();
        Truncation { blocks }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Element of the ideal whose image escapes it.
    pub element: String,
    pub image: String,
    /// Generator index and monomial multiplier, when the element is `h·g`.
    pub generator: Option<usize>,
    pub multiplier: Option<Exponents>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub ideal: String,
    pub compatible: bool,
    pub checked: usize,
    pub degree_bound: u32,
    pub counterexample: Option<Counterexample>,
}

fn check_ring(c: &SplittingCandidate, ideal: &ChartIdeal) -> Result<()> {
    for g in &ideal.generators {
        c.sigma.same_ring(g)?;
    }
    Ok(())
}

/// `s(h·g) ∈ I` for every generator `g` and monomial `h` with
/// `deg(h·g) ≤ bound`. The first failure in (generator, degree, lex) order
/// is reported.
pub fn compatibility_check(c: &SplittingCandidate, ideal: &ChartIdeal, bound: u32) -> Result<CompatibilityReport> {
    check_ring(c, ideal)?;
    if let Some(d) = ideal.min_degree() {
        if bound < d {
            return Err(Error::BoundTooSmall { bound: bound as usize, min_degree: d as usize });
        }
    }
    let field = c.sigma.field();
    let nvars = c.vars().len();
    let mut jobs: Vec<(usize, Exponents)> = Vec::new();
    for (k, g) in ideal.nonzero() {
        let dg = g.degree().expect("nonzero");
        if dg <= bound {
            jobs.extend(monomials_up_to(nvars, bound - dg).into_iter().map(|h| (k, h)));
        }
    }
    let images = par::map(&jobs, |(k, h)| cartier_phi(&c.kernel.mul(&ideal.generators[*k].mul_monomial(h))));
    let top = images.iter().filter_map(CharPPolynomial::degree).max().unwrap_or(0).max(bound);
    let graded = ideal.is_homogeneous();
    let coords = Coordinates::new(nvars, top, graded);
    let trunc = Truncation::of_ideal(&coords, field, ideal);
    let inside = par::map(&images, |img| img.is_zero() || trunc.contains(&coords, img));
    let failure = inside.iter().position(|ok| !ok);
    Ok(CompatibilityReport {
        ideal: ideal.label.clone(),
        compatible: failure.is_none(),
        checked: jobs.len(),
        degree_bound: bound,
        counterexample: failure.map(|i| {
            let (k, h) = &jobs[i];
            Counterexample {
                element: ideal.generators[*k].mul_monomial(h).render(),
                image: images[i].render(),
                generator: Some(*k),
                multiplier: Some(h.clone()),
            }
        }),
    })
}

/// Compatibility with `I ∩ J`, using a basis of `I_{≤D} ∩ J_{≤D}`.
fn intersection_check(c: &SplittingCandidate, a: &ChartIdeal, b: &ChartIdeal, bound: u32) -> Result<CompatibilityReport> {
    let field = c.sigma.field();
    let vars = c.vars().to_vec();
    let graded = a.is_homogeneous() && b.is_homogeneous();
    let label = format!("{} ∩ {}", a.label, b.label);
    let coords = Coordinates::new(vars.len(), bound, graded);
    let meet = Truncation::of_ideal(&coords, field, a).intersect(&Truncation::of_ideal(&coords, field, b), field);
    let mut elements = Vec::new();
    for (blk, e) in meet.blocks.iter().enumerate() {
        for r in e.rows() {
            elements.push(coords.polynomial(field, &vars, blk, r));
        }
    }
    let images = par::map(&elements, |v| cartier_phi(&c.kernel.mul(v)));
    let top = images.iter().filter_map(CharPPolynomial::degree).max().unwrap_or(0);
    // images of degree above the bound are tested against a larger piece
    let (coords, meet) = if top > bound {
        let big = Coordinates::new(vars.len(), top, graded);
        let m = Truncation::of_ideal(&big, field, a).intersect(&Truncation::of_ideal(&big, field, b), field);
        (big, m)
    } else {
        (coords, meet)
    };
    let inside = par::map(&images, |img| img.is_zero() || meet.contains(&coords, img));
    let failure = inside.iter().position(|ok| !ok);
    Ok(CompatibilityReport {
        ideal: label,
        compatible: failure.is_none(),
        checked: elements.len(),
        degree_bound: bound,
        counterexample: failure.map(|i| Counterexample {
            element: elements[i].render(),
            image: images[i].render(),
            generator: None,
            multiplier: None,
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub first: CompatibilityReport,
    pub second: CompatibilityReport,
    pub preconditions_hold: bool,
    pub sum: Option<CompatibilityReport>,
    pub intersection: Option<CompatibilityReport>,
    /// Dimension of `(I ∩ J)_{≤D}`.
    pub intersection_dim: Option<usize>,
}

impl ClosureReport {
    /// True when the preconditions fail or both closure checks pass.
    pub fn holds(&self) -> bool {
        !self.preconditions_hold
            || (self.sum.as_ref().is_some_and(|r| r.compatible) && self.intersection.as_ref().is_some_and(|r| r.compatible))
    }
}

/// Compatibility with `I + J` and `I ∩ J` for two compatible ideals.
pub fn closure_property_check(
    c: &SplittingCandidate,
    a: &ChartIdeal,
    b: &ChartIdeal,
    bound: u32,
) -> Result<ClosureReport> {
    let first = compatibility_check(c, a, bound)?;
    let second = compatibility_check(c, b, bound)?;
    let mut report = ClosureReport {
        preconditions_hold: first.compatible && second.compatible,
        first,
        second,
        sum: None,
        intersection: None,
        intersection_dim: None,
    };
    if report.preconditions_hold {
        report.sum = Some(compatibility_check(c, &a.sum(b)?, bound)?);
        let inter = intersection_check(c, a, b, bound)?;
        report.intersection_dim = Some(inter.checked);
        report.intersection = Some(inter);
    }
    Ok(report)
}

/// Dimension of `I_{≤D}`, exposed for tests and reports.
pub fn truncated_dim(ideal: &ChartIdeal, bound: u32) -> usize {
    let g = &ideal.generators[0];
    let coords = Coordinates::new(g.vars().len(), bound, ideal.is_homogeneous());
    Truncation::of_ideal(&coords, g.field(), ideal).dim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, names: &[&str]) -> (PrimeField, Vec<String>) {
        (PrimeField::new(p).unwrap(), names.iter().map(|s| s.to_string()).collect())
    }

    fn parse(f: PrimeField, vars: &[String], s: &str) -> CharPPolynomial {
        CharPPolynomial::parse_in(f, vars, s).unwrap()
    }

    #[test]
    fn cartier_examples() {
        let (f, v) = ring(2, &["x"]);
        assert!(cartier_phi(&parse(f, &v, "x")).is_one());
        assert!(cartier_phi(&parse(f, &v, "1")).is_zero());
        let (f, v) = ring(3, &["x", "y"]);
        assert_eq!(cartier_phi(&parse(f, &v, "x^5 y^2")), parse(f, &v, "x"));
    }

    #[test]
    fn splitting_examples() {
        let (f, v) = ring(3, &["t"]);
        let t = SplittingCandidate::new(parse(f, &v, "t")).unwrap();
        assert!(is_splitting(&t));
        assert!(!is_splitting(&SplittingCandidate::new(parse(f, &v, "t^2")).unwrap()));
        assert!(split_apply(&t, &parse(f, &v, "t^4")).unwrap().is_zero());
        assert_eq!(split_apply(&t, &parse(f, &v, "t^3")).unwrap(), parse(f, &v, "t"));
        let (f2, v2) = ring(2, &["t"]);
        let t2 = SplittingCandidate::new(parse(f2, &v2, "t")).unwrap();
        assert!(split_apply(&t2, &parse(f2, &v2, "t")).unwrap().is_zero());
        let (f, v) = ring(2, &["x", "y"]);
        assert!(is_splitting(&SplittingCandidate::new(parse(f, &v, "x y")).unwrap()));
        assert!(SplittingCandidate::new(CharPPolynomial::zero(f, &v)).is_err());
    }

    #[test]
    fn compatibility_examples() {
        let (f, v) = ring(2, &["t"]);
        let s = SplittingCandidate::new(parse(f, &v, "t")).unwrap();
        let t_ideal = ChartIdeal::new("(t)", vec![parse(f, &v, "t")]).unwrap();
        assert!(compatibility_check(&s, &t_ideal, 20).unwrap().compatible);
        let shifted = ChartIdeal::new("(t-1)", vec![parse(f, &v, "t - 1")]).unwrap();
        let r = compatibility_check(&s, &shifted, 20).unwrap();
        assert!(!r.compatible);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.multiplier, Some(vec![0]));
        assert_eq!(cx.image, "1");
        assert!(matches!(compatibility_check(&s, &t_ideal, 0), Err(Error::BoundTooSmall { .. })));
    }

    #[test]
    fn closure_examples() {
        let (f, v) = ring(2, &["x", "y"]);
        let s = SplittingCandidate::new(parse(f, &v, "x y")).unwrap();
        let x = ChartIdeal::new("(x)", vec![parse(f, &v, "x")]).unwrap();
        let y = ChartIdeal::new("(y)", vec![parse(f, &v, "y")]).unwrap();
        let r = closure_property_check(&s, &x, &y, 10).unwrap();
        assert!(r.preconditions_hold && r.holds());
        // (x) ∩ (y) = (xy): monomials of degree ≤ 10 divisible by xy
        assert_eq!(r.intersection_dim, Some(45));
        let xy = ChartIdeal::new("(x,y)", vec![parse(f, &v, "x"), parse(f, &v, "y")]).unwrap();
        let nested = closure_property_check(&s, &x, &xy, 10).unwrap();
        assert!(nested.holds());
        assert_eq!(nested.intersection_dim, Some(truncated_dim(&x, 10)));
        let same = closure_property_check(&s, &x, &x, 10).unwrap();
        assert_eq!(same.sum.unwrap().compatible, same.first.compatible);
    }

    #[test]
    fn ring_mismatch_is_rejected() {
        let (f, v) = ring(2, &["x"]);
        let (_, w) = ring(2, &["y"]);
        let s = SplittingCandidate::new(parse(f, &v, "x")).unwrap();
        assert!(split_apply(&s, &parse(f, &w, "y")).is_err());
        let (f3, _) = ring(3, &["x"]);
        assert!(split_apply(&s, &parse(f3, &v, "x")).is_err());
    }
}
