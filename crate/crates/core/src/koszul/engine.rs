//! Choice between the bar complex and the minimal resolution.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{GradedModule, ModulePresentation, ModuleSide, QuadraticAlgebra, QuadraticPresentation};
use crate::error::{Error, Result};
use crate::field::Field;

use super::bar::{bar_tor_table, module_tor_table, pair_tor_table};
use super::resolution::{resolution_module_tor_table, resolution_pair_tor_table, resolution_tor_table};
use super::tor::TorTable;

/// Under `Auto`, the bar complex is used when no chain group exceeds this.
pub const AUTO_BAR_LIMIT: usize = 60_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorEngine {
    Bar,
    Resolution,
    #[default]
    Auto,
}

impl fmt::Display for TorEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorEngine::Bar => "bar",
            TorEngine::Resolution => "resolution",
            TorEngine::Auto => "auto",
        })
    }
}

impl FromStr for TorEngine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bar" => Ok(TorEngine::Bar),
            "resolution" => Ok(TorEngine::Resolution),
            "auto" => Ok(TorEngine::Auto),
            _ => Err(Error::Parse(format!("unknown Tor engine `{s}`"))),
        }
    }
}

/// Largest chain group `L ⊗ Ā^{⊗i} ⊗ N` for `i ≤ i_max + 1`, `j ≤ j_max`,
/// from the three Hilbert series.
pub fn bar_group_bound(left: &[usize], algebra: &[usize], right: &[usize], i_max: usize) -> usize {
    let j_max = algebra.len() - 1;
    let mut best = 0usize;
    // sizes[i][d] = dim (L ⊗ Ā^{⊗i})_d
    let mut cur: Vec<usize> = left.to_vec();
    for _ in 0..=i_max + 1 {
        for j in 0..=j_max {
            let total = (0..=j).fold(0usize, |s, d| s.saturating_add(cur[d].saturating_mul(right[j - d])));
            best = best.max(total);
        }
        let mut next = vec![0usize; j_max + 1];
        for (d, n) in next.iter_mut().enumerate() {
            for e in 1..=d {
                *n = n.saturating_add(cur[d - e].saturating_mul(algebra[e]));
            }
        }
        cur = next;
    }
    best
}

fn resolve_engine<F: Field>(
    engine: TorEngine,
    algebra: &QuadraticPresentation<F>,
    left: &ModulePresentation<F>,
    right: &ModulePresentation<F>,
    i_max: usize,
    j_max: usize,
) -> Result<TorEngine> {
    if engine != TorEngine::Auto {
        return Ok(engine);
    }
    let a = std::sync::Arc::new(QuadraticAlgebra::new(algebra.clone())?);
    let dims = a.hilbert_series(j_max)?.dims;
    let l = GradedModule::new(a.clone(), left.clone())?.hilbert_series(j_max)?.dims;
    let r = GradedModule::new(a.clone(), right.clone())?.hilbert_series(j_max)?.dims;
    Ok(if bar_group_bound(&l, &dims, &r, i_max) <= AUTO_BAR_LIMIT { TorEngine::Bar } else { TorEngine::Resolution })
}

/// `Tor^A(k, k)` with the requested engine; returns the engine used.
pub fn tor_table<F: Field>(
    p: &QuadraticPresentation<F>,
    i_max: usize,
    j_max: usize,
    engine: TorEngine,
) -> Result<(TorTable, TorEngine)> {
    let k = ModulePresentation::trivial(p.clone(), ModuleSide::Right);
    let kl = ModulePresentation::trivial(p.clone(), ModuleSide::Left);
    match resolve_engine(engine, p, &k, &kl, i_max, j_max)? {
        TorEngine::Bar => Ok((bar_tor_table(p, i_max, j_max)?, TorEngine::Bar)),
        _ => Ok((resolution_tor_table(p, i_max, j_max)?, TorEngine::Resolution)),
    }
}

/// `Tor^A(M, k)` for right `M`, `Tor^A(k, M)` for left `M`.
pub fn module_tor<F: Field>(
    m: &ModulePresentation<F>,
    i_max: usize,
    j_max: usize,
    engine: TorEngine,
) -> Result<(TorTable, TorEngine)> {
    let p = m.algebra();
    let (l, r) = match m.side() {
        ModuleSide::Right => (m.clone(), ModulePresentation::trivial(p.clone(), ModuleSide::Left)),
        ModuleSide::Left => (ModulePresentation::trivial(p.clone(), ModuleSide::Right), m.clone()),
    };
    match resolve_engine(engine, p, &l, &r, i_max, j_max)? {
        TorEngine::Bar => Ok((module_tor_table(p, m, i_max, j_max)?, TorEngine::Bar)),
        _ => Ok((resolution_module_tor_table(m, i_max, j_max)?, TorEngine::Resolution)),
    }
}

/// `Tor^A(M, N)` for a right module `M` and a left module `N`.
pub fn pair_tor<F: Field>(
    m: &ModulePresentation<F>,
    n: &ModulePresentation<F>,
    i_max: usize,
    j_max: usize,
    engine: TorEngine,
) -> Result<(TorTable, TorEngine)> {
    if m.algebra() != n.algebra() {
        return Err(Error::InvalidPresentation("modules are presented over different algebras".into()));
    }
    if m.side() != ModuleSide::Right || n.side() != ModuleSide::Left {
        return Err(Error::InvalidPresentation("pair Tor needs a right module and a left module".into()));
    }
    match resolve_engine(engine, m.algebra(), m, n, i_max, j_max)? {
        TorEngine::Bar => Ok((pair_tor_table(m.algebra(), m, n, i_max, j_max)?, TorEngine::Bar)),
        _ => Ok((resolution_pair_tor_table(m, n, i_max, j_max)?, TorEngine::Resolution)),
    }
}
