//! Big-cell charts of `P^1` and `Gr(2,4)` with Schubert ideals given by
//! minors of the chart matrix `[I_k | X]`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::flag::{subsets, PlueckerIndex, SchubertSpec};

use super::poly::CharPPolynomial;
use super::splitting::{ChartIdeal, SplittingCandidate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ChartCase {
    P1,
    Gr24BigCell,
}

impl ChartCase {
    pub const ALL: [ChartCase; 2] = [ChartCase::P1, ChartCase::Gr24BigCell];

    fn shape(self) -> (usize, usize) {
        match self {
            ChartCase::P1 => (1, 2),
            ChartCase::Gr24BigCell => (2, 4),
        }
    }

    fn var_names(self) -> Vec<String> {
        let names: &[&str] = match self {
            ChartCase::P1 => &["t"],
            ChartCase::Gr24BigCell => &["a", "b", "c", "d"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for ChartCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChartCase::P1 => "p1",
            ChartCase::Gr24BigCell => "gr24",
        })
    }
}

impl FromStr for ChartCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(ChartCase::P1),
            "gr24" | "gr24-big-cell" | "gr24_big_cell" => Ok(ChartCase::Gr24BigCell),
            _ => Err(Error::Parse(format!("unknown chart case `{s}` (expected p1 or gr24)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChartData {
    pub case: ChartCase,
    pub vars: Vec<String>,
    /// The minor of each Plücker coordinate on the chart.
    pub minors: Vec<(PlueckerIndex, CharPPolynomial)>,
    pub sigma: CharPPolynomial,
    /// Chart traces of the Schubert varieties; the top one (zero ideal) is
    /// left out.
    pub ideals: Vec<ChartIdeal>,
}

impl ChartData {
    pub fn candidate(&self) -> Result<SplittingCandidate> {
        SplittingCandidate::new(self.sigma.clone())
    }

    pub fn minor(&self, tau: &PlueckerIndex) -> Option<&CharPPolynomial> {
        self.minors.iter().find(|(t, _)| t == tau).map(|(_, m)| m)
    }
}

/// Entry `(r, c)` of `[I_k | X]`.
fn entry(field: PrimeField, vars: &[String], k: usize, r: usize, c: usize) -> CharPPolynomial {
    if c < k {
        CharPPolynomial::constant(field, vars, (r == c) as i64)
    } else {
        CharPPolynomial::var(field, vars, r * (vars.len() / k) + (c - k))
    }
}

fn permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    if k == 0 {
        return vec![(Vec::new(), false)];
    }
    let mut out = Vec::new();
    for (perm, odd) in permutations(k - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, k - 1);
            // inserting at `pos` adds `len − pos` inversions
            out.push((p, odd ^ ((perm.len() - pos) % 2 == 1)));
        }
    }
    out
}

/// Maximal minor on the columns of `tau`, by the Leibniz formula.
fn chart_minor(field: PrimeField, vars: &[String], k: usize, tau: &PlueckerIndex) -> CharPPolynomial {
    let cols: Vec<usize> = tau.entries().iter().map(|&e| e as usize - 1).collect();
    let mut total = CharPPolynomial::zero(field, vars);
    for (perm, odd) in permutations(k) {
        let mut term = CharPPolynomial::one(field, vars);
        for (r, &c) in perm.iter().enumerate() {
            term = term.mul(&entry(field, vars, k, r, cols[c]));
        }
        total = if odd { total.sub(&term) } else { total.add(&term) };
    }
    total
}

/// The cyclic intervals `{i, i+1, …, i+k−1} mod n`.
fn cyclic_intervals(k: usize, n: usize) -> Result<Vec<PlueckerIndex>> {
    let mut out: Vec<PlueckerIndex> = Vec::new();
    for i in 0..n {
        let e = (0..k).map(|j| ((i + j) % n + 1) as u8).collect();
        let t = PlueckerIndex::new(e, n)?;
        if !out.contains(&t) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Variables, `σ` and Schubert ideals on the big cell `p_{1…k} ≠ 0`.
///
/// `σ` is the product of the Plücker coordinates on cyclic intervals, a
/// section of `O(n)`, the anticanonical bundle. Each `X_w` is cut out by
/// the minors `p_τ` with `τ ≰ w`.
pub fn schubert_chart_data(case: ChartCase, field: PrimeField) -> Result<ChartData> {
    let (k, n) = case.shape();
    let vars = case.var_names();
    let all = subsets(k, n);
    let minors: Vec<(PlueckerIndex, CharPPolynomial)> =
        all.iter().map(|t| (t.clone(), chart_minor(field, &vars, k, t))).collect();
    let lookup = |t: &PlueckerIndex| minors.iter().find(|(s, _)| s == t).map(|(_, m)| m.clone()).expect("every subset");
    let mut sigma = CharPPolynomial::one(field, &vars);
    for t in cyclic_intervals(k, n)? {
        sigma = sigma.mul(&lookup(&t));
    }
    let mut ideals = Vec::new();
    for w in &all {
        let spec = SchubertSpec::standard(w.clone());
        let mut gens = Vec::new();
        for (tau, m) in &minors {
            if !spec.keeps(tau)? && !m.is_zero() {
                gens.push(m.clone());
            }
        }
        if !gens.is_empty() {
            ideals.push(ChartIdeal::new(spec.to_string(), gens)?);
        }
    }
    Ok(ChartData { case, vars, minors, sigma, ideals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsplit::splitting::{compatibility_check, is_splitting};

    fn idx(e: &[u8]) -> PlueckerIndex {
        PlueckerIndex::new(e.to_vec(), 4).unwrap()
    }

    #[test]
    fn p1_chart() {
        let f = PrimeField::new(5).unwrap();
        let d = schubert_chart_data(ChartCase::P1, f).unwrap();
        assert_eq!(d.vars, vec!["t"]);
        assert_eq!(d.sigma.render(), "1 * t");
        assert_eq!(d.ideals.len(), 1);
        assert_eq!(d.ideals[0].generators, vec![d.sigma.clone()]);
    }

    #[test]
    fn gr24_minors_and_sigma() {
        let f = PrimeField::new(7).unwrap();
        let d = schubert_chart_data(ChartCase::Gr24BigCell, f).unwrap();
        let v = &d.vars;
        let parse = |s: &str| CharPPolynomial::parse_in(f, v, s).unwrap();
        assert_eq!(d.vars.len(), 4);
        assert!(d.minor(&idx(&[1, 2])).unwrap().is_one());
        assert_eq!(d.minor(&idx(&[1, 3])).unwrap(), &parse("c"));
        assert_eq!(d.minor(&idx(&[2, 3])).unwrap(), &parse("-a"));
        assert_eq!(d.minor(&idx(&[3, 4])).unwrap(), &parse("a d - b c"));
        assert_eq!(d.sigma, parse("-a d").mul(&parse("a d - b c")));
        // every Schubert variety but the whole space
        assert_eq!(d.ideals.len(), 5);
    }

    #[test]
    fn gr24_sigma_splits_compatibly() {
        for p in [2, 3] {
            let f = PrimeField::new(p).unwrap();
            let d = schubert_chart_data(ChartCase::Gr24BigCell, f).unwrap();
            let s = d.candidate().unwrap();
            assert!(is_splitting(&s));
            for ideal in &d.ideals {
                assert!(compatibility_check(&s, ideal, 6).unwrap().compatible, "{}", ideal.label);
            }
        }
    }

    #[test]
    fn divisor_alone_is_not_a_splitting() {
        let f = PrimeField::new(2).unwrap();
        let d = schubert_chart_data(ChartCase::Gr24BigCell, f).unwrap();
        let s = SplittingCandidate::new(d.minor(&idx(&[3, 4])).unwrap().clone()).unwrap();
        assert!(!is_splitting(&s));
    }
}
