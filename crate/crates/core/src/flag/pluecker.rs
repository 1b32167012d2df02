use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::{unit_weight, QuadraticPresentation};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{left_kernel_basis, Echelon, Matrix, SparseVec};
use crate::weight::Weight;

/// Most Plücker coordinates a presentation may have.
pub const MAX_PLUECKER_GENERATORS: usize = 20;

/// Most monomial products `realize_graded_dim` will expand.
pub const REALIZE_LIMIT: usize = 2_000_000;

/// A strictly increasing tuple `1 ≤ s_1 < … < s_k ≤ n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlueckerIndex(Vec<u8>);

impl PlueckerIndex {
    pub fn new(mut entries: Vec<u8>, n: usize) -> Result<Self> {
        entries.sort_unstable();
        let distinct = entries.windows(2).all(|w| w[0] < w[1]);
        if entries.is_empty() || !distinct || entries[0] == 0 || *entries.last().unwrap() as usize > n {
            return Err(Error::OutOfRange(format!("{entries:?} is not a subset of 1..{n}")));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Label such as `p13`, with `_` separators once indices pass 9.
    pub fn label(&self) -> String {
        let sep = if self.0.iter().any(|&e| e > 9) { "_" } else { "" };
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        format!("p{}", parts.join(sep))
    }

    /// Weight vector in `Z^n`: the indicator of the subset.
    pub fn weight(&self, n: usize) -> Weight {
        let mut w = Weight::zero(n);
        for &e in &self.0 {
            w.0[e as usize - 1] = 1;
        }
        w
    }

    /// `{n+1−s : s ∈ self}`, the image under the longest Weyl group element.
    pub fn reversed(&self, n: usize) -> Self {
        let mut v: Vec<u8> = self.0.iter().map(|&s| (n + 1) as u8 - s).collect();
        v.sort_unstable();
        Self(v)
    }
}

impl fmt::Display for PlueckerIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for PlueckerIndex {
    type Err = Error;

    /// Accepts `1,3`, `{1,3}` or `13` (single digits only in the last form).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}');
        let bad = || Error::Parse(format!("bad subset `{s}`"));
        let entries: Vec<u8> = if t.contains(',') {
            t.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            t.chars().map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad)).collect::<Result<_>>()?
        };
        PlueckerIndex::new(entries, u8::MAX as usize)
    }
}

/// All `k`-subsets of `1..n` in lexicographic order.
pub fn subsets(k: usize, n: usize) -> Vec<PlueckerIndex> {
    fn rec(start: u8, n: u8, k: usize, cur: &mut Vec<u8>, out: &mut Vec<PlueckerIndex>) {
        if cur.len() == k {
            out.push(PlueckerIndex(cur.clone()));
            return;
        }
        for s in start..=n {
            cur.push(s);
            rec(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n as u8, k, &mut Vec::new(), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// Componentwise order on sorted subsets of equal size.
pub fn bruhat_leq(s: &PlueckerIndex, t: &PlueckerIndex) -> Result<bool> {
    if s.k() != t.k() {
        return Err(Error::OutOfRange(format!("cannot compare {s} and {t}: different sizes")));
    }
    Ok(s.0.iter().zip(&t.0).all(|(a, b)| a <= b))
}

/// Polynomials with integer coefficients in `k·n` matrix entries.
type IntPoly = BTreeMap<Vec<u8>, i64>;

fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        let k = used.len();
        if cur.len() == k {
            out.push((cur.clone(), sign));
            return;
        }
        for i in 0..k {
            if !used[i] {
                // inversions added by placing i after the current prefix
                let inv = cur.iter().filter(|&&c| c > i).count();
                used[i] = true;
                cur.push(i);
                rec(cur, used, if inv % 2 == 0 { sign } else { -sign }, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], 1, &mut out);
    out
}

/// The maximal minor on columns `s` of the generic `k × n` matrix.
fn minor(s: &PlueckerIndex, n: usize) -> IntPoly {
    let k = s.k();
    let mut p = IntPoly::new();
    for (perm, sign) in permutations(k) {
        let mut e = vec![0u8; k * n];
        for (r, &c) in perm.iter().enumerate() {
            e[r * n + s.0[c] as usize - 1] += 1;
        }
        *p.entry(e).or_insert(0) += sign;
    }
    p
}

/// The Grassmannian `Gr(k, n)` in its Plücker embedding.
#[derive(Clone, Debug)]
pub struct Grassmannian<F: Field> {
    pub k: usize,
    pub n: usize,
    pub subsets: Vec<PlueckerIndex>,
    pub presentation: QuadraticPresentation<F>,
}

impl<F: Field> Grassmannian<F> {
    pub fn new(k: usize, n: usize, field: F) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::OutOfRange(format!("need 1 ≤ k < n, got k={k}, n={n}")));
        }
        let g = binomial(n, k);
        if g > MAX_PLUECKER_GENERATORS {
            return Err(Error::LimitExceeded(format!(
                "Gr({k},{n}) has {g} Plücker coordinates (limit {MAX_PLUECKER_GENERATORS})"
            )));
        }
        let subsets = subsets(k, n);
        let minors: Vec<IntPoly> = subsets.iter().map(|s| minor(s, n)).collect();
        // evaluation V⊗V → polynomials; R is its kernel
        let mut monomials: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut images: Vec<IntPoly> = Vec::with_capacity(g * g);
        for a in &minors {
            for b in &minors {
                let p = poly_mul(a, b);
                for e in p.keys() {
                    let next = monomials.len();
                    monomials.entry(e.clone()).or_insert(next);
                }
                images.push(p);
            }
        }
        let mut m = Matrix::zeros(field.clone(), g * g, monomials.len());
        for (r, p) in images.iter().enumerate() {
            for (e, c) in p {
                m.set(r, monomials[e], field.from_i64(*c));
            }
        }
        let relations = left_kernel_basis(&m);
        let labels = subsets.iter().map(PlueckerIndex::label).collect();
        let weights = subsets.iter().map(|s| s.weight(n)).collect();
        let presentation = QuadraticPresentation::new(labels, Some(weights), relations)?;
        Ok(Self { k, n, subsets, presentation })
    }

    pub fn index_of(&self, s: &PlueckerIndex) -> Result<usize> {
        self.subsets
            .iter()
            .position(|t| t == s)
            .ok_or_else(|| Error::OutOfRange(format!("{s} is not a {}-subset of 1..{}", self.k, self.n)))
    }

    pub fn top(&self) -> PlueckerIndex {
        self.subsets.last().expect("nonempty").clone()
    }

    pub fn bottom(&self) -> PlueckerIndex {
        self.subsets[0].clone()
    }
}

/// Plücker presentation of the homogeneous coordinate ring of `Gr(k, n)`.
pub fn pluecker_presentation<F: Field>(k: usize, n: usize, field: F) -> Result<QuadraticPresentation<F>> {
    Ok(Grassmannian::new(k, n, field)?.presentation)
}

/// Dimension of the span of all `m`-fold products of Plücker minors.
pub fn realize_graded_dim<F: Field>(k: usize, n: usize, m: usize, field: &F) -> Result<usize> {
    if k == 0 || k >= n {
        return Err(Error::OutOfRange(format!("need 1 ≤ k < n, got k={k}, n={n}")));
    }
    if m == 0 {
        return Ok(1);
    }
    let subs = subsets(k, n);
    let g = subs.len();
    let work = (m * k).saturating_mul(g.saturating_pow(m as u32));
    if work > REALIZE_LIMIT {
        return Err(Error::LimitExceeded(format!("{work} minor products for degree {m} on Gr({k},{n})")));
    }
    let minors: Vec<IntPoly> = subs.iter().map(|s| minor(s, n)).collect();
    // products commute, so multisets suffice; group them by content
    let mut by_content: BTreeMap<Weight, Vec<IntPoly>> = BTreeMap::new();
    let mut choice = vec![0usize; m];
    loop {
        let mut p = minors[choice[0]].clone();
        let mut w = subs[choice[0]].weight(n);
        for &c in &choice[1..] {
            p = poly_mul(&p, &minors[c]);
            w.add_assign(&subs[c].weight(n));
        }
        by_content.entry(w).or_default().push(p);
        // next non-decreasing sequence
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(rank_blocks(field, by_content));
            }
            i -= 1;
            if choice[i] + 1 < g {
                let v = choice[i] + 1;
                for c in choice[i..].iter_mut() {
                    *c = v;
                }
                break;
            }
        }
    }
}

fn rank_blocks<F: Field>(field: &F, blocks: BTreeMap<Weight, Vec<IntPoly>>) -> usize {
    let mut total = 0;
    for polys in blocks.values() {
        let mut index: HashMap<&Vec<u8>, u32> = HashMap::new();
        for p in polys {
            for e in p.keys() {
                let next = index.len() as u32;
                index.entry(e).or_insert(next);
            }
        }
        let mut ech = Echelon::new(field.clone(), index.len());
        for p in polys {
            let mut v: SparseVec<F::Elem> = p
                .iter()
                .map(|(e, c)| (index[e], field.from_i64(*c)))
                .filter(|(_, x)| !field.is_zero(x))
                .collect();
            v.sort_by_key(|t| t.0);
            ech.insert(&v);
        }
        total += ech.rank();
    }
    total
}

/// `dim V_{m ω_k}` for `GL_n` by the Weyl dimension formula.
pub fn weyl_dim_rectangular(k: usize, n: usize, m: usize) -> Result<u64> {
    if k == 0 || k >= n {
        return Err(Error::OutOfRange(format!("need 1 ≤ k < n, got k={k}, n={n}")));
    }
    let lambda: Vec<i64> = (0..n).map(|i| if i < k { m as i64 } else { 0 }).collect();
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..n {
        for j in i + 1..n {
            num *= BigUint::from((lambda[i] - lambda[j] + (j - i) as i64) as u64);
            den *= BigUint::from((j - i) as u64);
        }
    }
    debug_assert!((&num % &den) == BigUint::from(0u32));
    (num / den).to_u64().ok_or_else(|| Error::LimitExceeded("Weyl dimension exceeds 64 bits".into()))
}

/// Indicator weights of the coordinates of `Z^n`, used by projective spaces.
pub fn coordinate_weights(n: usize) -> Vec<Weight> {
    (0..n).map(|i| unit_weight(n, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn minors_and_signs() {
        let p = minor(&PlueckerIndex(vec![1, 2]), 2);
        assert_eq!(p.len(), 2);
        assert_eq!(p.values().copied().collect::<Vec<_>>().iter().sum::<i64>(), 0);
        assert_eq!(permutations(3).iter().filter(|(_, s)| *s == -1).count(), 3);
    }

    #[test]
    fn gr24_presentation() {
        let gr = Grassmannian::new(2, 4, Rationals).unwrap();
        assert_eq!(gr.presentation.num_generators(), 6);
        assert_eq!(gr.presentation.relations().dim(), 16);
        assert_eq!(gr.presentation.labels()[1], "p13");
    }

    #[test]
    fn projective_space_relations_are_commutators() {
        let f = PrimeField::new(101).unwrap();
        let p = pluecker_presentation(1, 4, f).unwrap();
        assert_eq!(p.relations().dim(), 6);
        let poly = QuadraticPresentation::polynomial_ring(f, 4);
        assert_eq!(p.relations(), poly.relations());
    }

    #[test]
    fn dimension_oracles() {
        let f = PrimeField::new(32003).unwrap();
        assert_eq!(realize_graded_dim(2, 4, 1, &f).unwrap(), 6);
        assert_eq!(realize_graded_dim(2, 4, 2, &f).unwrap(), 20);
        assert_eq!(realize_graded_dim(1, 3, 2, &f).unwrap(), 6);
        assert_eq!(weyl_dim_rectangular(2, 4, 1).unwrap(), 6);
        assert_eq!(weyl_dim_rectangular(2, 4, 2).unwrap(), 20);
        assert_eq!(weyl_dim_rectangular(3, 7, 0).unwrap(), 1);
        for m in 0..6u64 {
            let closed = (m + 1) * (m + 2) * (m + 2) * (m + 3) / 12;
            assert_eq!(weyl_dim_rectangular(2, 4, m as usize).unwrap(), closed);
        }
    }

    #[test]
    fn bruhat_examples() {
        let p = |s: &str| s.parse::<PlueckerIndex>().unwrap();
        assert!(bruhat_leq(&p("12"), &p("34")).unwrap());
        assert!(!bruhat_leq(&p("14"), &p("23")).unwrap());
        assert!(!bruhat_leq(&p("23"), &p("14")).unwrap());
        assert!(bruhat_leq(&p("13"), &p("13")).unwrap());
        assert!(bruhat_leq(&p("1"), &p("12")).is_err());
        assert_eq!(p("{1,3}"), p("13"));
        assert_eq!(p("1,10").label(), "p1_10");
    }

    #[test]
    fn limits() {
        assert!(matches!(Grassmannian::new(3, 12, Rationals), Err(Error::LimitExceeded(_))));
        assert!(Grassmannian::new(0, 3, Rationals).is_err());
    }
}
