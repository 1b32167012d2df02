//! TOML file formats for presentations and modules.
//!
//! ```toml
//! field = "gf:32003"
//! generators = ["x", "y"]
//! weights = [[1, 0], [0, 1]]          # optional
//! relations = [
//!     [[0, 1, "1"], [1, 0, "-1"]],    # x⊗y − y⊗x
//! ]
//! ```
//!
//! Each relation is a list of `(i, j, coefficient)` triples standing for
//! `coefficient · e_i ⊗ e_j`. Coefficients are integers or `"num/den"`
//! strings. Module files name a presentation file (relative to the module
//! file) and give `J` the same way, with `(b, x)` pairs for right modules and
//! `(x, b)` pairs for left modules.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{parse_rational, Field, FieldSpec};
use crate::linalg::Subspace;
use crate::weight::Weight;

use super::graded::{ModulePresentation, ModuleSide};
use super::presentation::QuadraticPresentation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    fn parse<F: Field>(&self, field: &F) -> Result<F::Elem> {
        match self {
            Coefficient::Int(v) => Ok(field.from_i64(*v)),
            Coefficient::Text(s) => field.from_rational(&parse_rational(s)?),
        }
    }
}

pub type Triple = (usize, usize, Coefficient);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub field: String,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i32>>>,
    #[serde(default)]
    pub relations: Vec<Vec<Triple>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub presentation: String,
    pub side: ModuleSide,
    pub m0_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0_weights: Option<Vec<Vec<i32>>>,
    #[serde(default)]
    pub relations: Vec<Vec<Triple>>,
}

fn parse_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

fn build_subspace<F: Field>(field: &F, rows: usize, cols: usize, rels: &[Vec<Triple>]) -> Result<Subspace<F>> {
    let mut vectors = Vec::with_capacity(rels.len());
    for (r, triples) in rels.iter().enumerate() {
        let mut v = vec![field.zero(); rows * cols];
        for (i, j, c) in triples {
            if *i >= rows || *j >= cols {
                return Err(Error::Parse(format!("relation {r}: index ({i}, {j}) out of range {rows}x{cols}")));
            }
            let x = c.parse(field)?;
            let slot = &mut v[i * cols + j];
            *slot = field.add(slot, &x);
        }
        vectors.push(v);
    }
    Subspace::span(field.clone(), rows * cols, vectors)
}

fn to_triples<F: Field>(s: &Subspace<F>, cols: usize) -> Vec<Vec<Triple>> {
    let f = s.field();
    (0..s.dim())
        .map(|r| {
            s.basis()
                .row(r)
                .iter()
                .enumerate()
                .filter(|(_, x)| !f.is_zero(x))
                .map(|(c, x)| (c / cols, c % cols, Coefficient::Text(f.render(x))))
                .collect()
        })
        .collect()
}

fn weights_of(raw: &Option<Vec<Vec<i32>>>) -> Option<Vec<Weight>> {
    raw.as_ref().map(|ws| ws.iter().map(|w| Weight(w.clone())).collect())
}

fn raw_weights(ws: &[Weight]) -> Option<Vec<Vec<i32>>> {
    if ws.iter().all(Weight::is_empty) {
        None
    } else {
        Some(ws.iter().map(|w| w.0.clone()).collect())
    }
}

impl PresentationFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_toml(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn field_spec(&self) -> Result<FieldSpec> {
        self.field.parse()
    }

    pub fn build<F: Field>(&self, field: F) -> Result<QuadraticPresentation<F>> {
        let g = self.generators.len();
        let r = build_subspace(&field, g, g, &self.relations)?;
        QuadraticPresentation::new(self.generators.clone(), weights_of(&self.weights), r)
    }

    pub fn from_presentation<F: Field>(p: &QuadraticPresentation<F>) -> Self {
        Self {
            field: p.field().spec().to_string(),
            generators: p.labels().to_vec(),
            weights: raw_weights(p.weights()),
            relations: to_triples(p.relations(), p.num_generators()),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("presentation files serialize")
    }
}

impl ModuleFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_toml(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    /// Path of the referenced presentation, resolved against `module_path`.
    pub fn presentation_path(&self, module_path: &Path) -> PathBuf {
        let p = Path::new(&self.presentation);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            module_path.parent().unwrap_or(Path::new(".")).join(p)
        }
    }

    pub fn build<F: Field>(&self, algebra: QuadraticPresentation<F>) -> Result<ModulePresentation<F>> {
        let g = algebra.num_generators();
        let (rows, cols) = match self.side {
            ModuleSide::Right => (self.m0_dim, g),
            ModuleSide::Left => (g, self.m0_dim),
        };
        let j = build_subspace(algebra.field(), rows, cols, &self.relations)?;
        ModulePresentation::new(algebra, self.side, self.m0_dim, weights_of(&self.m0_weights), j)
    }

    pub fn from_module<F: Field>(m: &ModulePresentation<F>, presentation: &str) -> Self {
        let cols = match m.side() {
            ModuleSide::Right => m.algebra().num_generators(),
            ModuleSide::Left => m.m0_dim(),
        };
        Self {
            presentation: presentation.to_string(),
            side: m.side(),
            m0_dim: m.m0_dim(),
            m0_weights: raw_weights(m.m0_weights()),
            relations: to_triples(m.relations1(), cols),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("module files serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    const PLANE: &str = r#"
field = "q"
generators = ["x", "y"]
relations = [[[0, 1, "1"], [1, 0, -1]]]
"#;

    #[test]
    fn round_trip() {
        let file = PresentationFile::parse(PLANE).unwrap();
        assert_eq!(file.field_spec().unwrap(), FieldSpec::Rationals);
        let p = file.build(Rationals).unwrap();
        assert_eq!(p.relations().dim(), 1);
        let again = PresentationFile::parse(&PresentationFile::from_presentation(&p).to_toml()).unwrap();
        assert_eq!(again.build(Rationals).unwrap(), p);
    }

    #[test]
    fn parse_errors() {
        assert!(PresentationFile::parse("field = 3").is_err());
        let bad_index = PLANE.replace("[1, 0, -1]", "[2, 0, -1]");
        assert!(PresentationFile::parse(&bad_index).unwrap().build(Rationals).is_err());
        let bad_coeff = PLANE.replace("\"1\"", "\"1/0\"");
        assert!(PresentationFile::parse(&bad_coeff).unwrap().build(Rationals).is_err());
        let zero_mod = PLANE.replace("\"1\"", "\"1/7\"");
        assert!(PresentationFile::parse(&zero_mod).unwrap().build(PrimeField::new(7).unwrap()).is_err());
    }

    #[test]
    fn module_file() {
        let p = PresentationFile::parse(PLANE).unwrap().build(Rationals).unwrap();
        let m = ModuleFile::parse("presentation = \"plane.toml\"\nside = \"right\"\nm0_dim = 1\nrelations = [[[0, 0, 1]]]\n")
            .unwrap();
        let mp = m.build(p).unwrap();
        assert_eq!(mp.relations1().dim(), 1);
        assert_eq!(m.presentation_path(Path::new("/tmp/x/m.toml")), PathBuf::from("/tmp/x/plane.toml"));
    }
}
