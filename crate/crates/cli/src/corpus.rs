//! Corpus files: a potential, named factorizations and modules, and
//! optional expected values.

use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use mfres::groebner::FreeModuleElement;
use mfres::mf::{cokernel_presentation, ModulePresentation, Over};
use mfres::pairings::ModuleSource;
use mfres::poly::parse_in;
use mfres::{MatrixFactorization, PolyMatrix, Polynomial, Ring};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusFile {
    pub name: String,
    pub ring: Vec<String>,
    pub potential: String,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub factorizations: IndexMap<String, FactorizationSpec>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub modules: IndexMap<String, ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expectations: Option<Expectations>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationSpec {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Base {
    Q,
    R,
}

/// `Q^rank / ⟨relations⟩`; each relation is a vector of length `rank`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub rank: usize,
    #[serde(default)]
    pub relations: Vec<Vec<String>>,
    pub over: Base,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntExpectation {
    pub left: String,
    pub right: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalExpectation {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsdExpectation {
    pub pairing: String,
    pub items: Vec<String>,
    pub psd: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub milnor_number: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub euler: Vec<IntExpectation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta: Vec<IntExpectation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub herbrand: Vec<IntExpectation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residue: Vec<RationalExpectation>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hrr_all_pairs: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub psd: Vec<PsdExpectation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chern_zero: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lemma_j: Vec<usize>,
}

/// A parsed and validated corpus.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub file: CorpusFile,
    pub ring: Arc<Ring>,
    pub potential: Polynomial,
    pub factorizations: IndexMap<String, MatrixFactorization>,
    pub modules: IndexMap<String, ModulePresentation>,
}

impl CorpusFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("corpus JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serializes")
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read `{}`: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

fn parse_entry(ring: &Arc<Ring>, text: &str, context: impl Fn() -> String) -> Result<Polynomial, CliError> {
    parse_in(ring, text).map_err(|e| CliError::Usage(format!("{}: {e}", context())))
}

fn parse_matrix(ring: &Arc<Ring>, rows: &[Vec<String>], context: &str) -> Result<PolyMatrix, CliError> {
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, text) in row.iter().enumerate() {
            out.push(parse_entry(ring, text, || format!("{context} entry ({}, {})", i + 1, j + 1))?);
        }
        parsed.push(out);
    }
    PolyMatrix::from_rows(ring, parsed).map_err(|e| CliError::Usage(format!("{context}: {e}")))
}

impl Corpus {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_file(CorpusFile::read(path)?)
    }

    pub fn from_file(file: CorpusFile) -> Result<Self, CliError> {
        let ring = Ring::new(&file.ring);
        let potential = parse_entry(&ring, &file.potential, || "potential".to_string())?;
        let mut factorizations = IndexMap::new();
        for (name, spec) in &file.factorizations {
            let a = parse_matrix(&ring, &spec.a, &format!("factorization `{name}`, matrix A"))?;
            let b = parse_matrix(&ring, &spec.b, &format!("factorization `{name}`, matrix B"))?;
            let mf = MatrixFactorization::new(name.clone(), potential.clone(), a, b)?;
            factorizations.insert(name.clone(), mf);
        }
        let mut modules = IndexMap::new();
        for (name, spec) in &file.modules {
            if factorizations.contains_key(name) {
                return Err(CliError::Usage(format!("name `{name}` is used by a factorization and a module")));
            }
            let mut rels = Vec::with_capacity(spec.relations.len());
            for (k, rel) in spec.relations.iter().enumerate() {
                if rel.len() != spec.rank {
                    return Err(CliError::Usage(format!(
                        "module `{name}`, relation {}: expected {} entries, found {}",
                        k + 1,
                        spec.rank,
                        rel.len()
                    )));
                }
                let mut comps = Vec::with_capacity(rel.len());
                for (i, text) in rel.iter().enumerate() {
                    comps.push(parse_entry(&ring, text, || {
                        format!("module `{name}`, relation {} entry {}", k + 1, i + 1)
                    })?);
                }
                rels.push(FreeModuleElement::new(comps));
            }
            let over = match spec.over {
                Base::Q => Over::Q,
                Base::R => Over::R(potential.clone()),
            };
            modules.insert(name.clone(), ModulePresentation::new(&ring, spec.rank, rels, over)?);
        }
        Ok(Corpus {
            file,
            ring,
            potential,
            factorizations,
            modules,
        })
    }

    pub fn factorization(&self, name: &str) -> Result<&MatrixFactorization, CliError> {
        self.factorizations
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no factorization named `{name}` in corpus `{}`", self.file.name)))
    }

    /// A module by name: a listed presentation, or the cokernel of a named
    /// factorization.
    pub fn module(&self, name: &str) -> Result<ModuleSource, CliError> {
        if let Some(p) = self.modules.get(name) {
            return Ok(ModuleSource::Presentation(p.clone()));
        }
        if let Some(mf) = self.factorizations.get(name) {
            return Ok(ModuleSource::Factorization(mf.clone()));
        }
        Err(CliError::Usage(format!("no module or factorization named `{name}` in corpus `{}`", self.file.name)))
    }

    pub fn presentation(&self, name: &str) -> Result<ModulePresentation, CliError> {
        Ok(match self.module(name)? {
            ModuleSource::Presentation(p) => p,
            ModuleSource::Factorization(mf) => cokernel_presentation(&mf),
        })
    }
}
