//! JSON documents for languages, instances, fractional polymorphisms and
//! multimorphism pairs. Rationals are strings `"p/q"` or `"p"`.

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use vcsp_core::fpoly::{FractionalPolymorphism, Mapping, Operation};
use vcsp_core::stp::MultimorphismPair;
use vcsp_core::{CostFunction, Domain, Instance, Language, Rational};

use crate::error::{CliError, Result};

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| CliError::Invalid(format!("bad rational {s:?}: {e}")))
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

fn parse_all(values: &[String]) -> Result<Vec<Rational>> {
    values.iter().map(|s| parse_rational(s)).collect()
}

fn format_all(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value) + "\n").map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents always serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub name: String,
    pub arity: usize,
    pub table: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageFile {
    pub domain: usize,
    pub functions: Vec<FunctionEntry>,
}

impl LanguageFile {
    pub fn from_language(lang: &Language<Rational>) -> Self {
        LanguageFile {
            domain: lang.domain().size(),
            functions: lang
                .iter()
                .map(|(name, f)| FunctionEntry {
                    name: name.to_string(),
                    arity: f.arity(),
                    table: format_all(f.table()),
                })
                .collect(),
        }
    }

    pub fn to_language(&self) -> Result<Language<Rational>> {
        let domain = Domain::new(self.domain)?;
        let mut lang = Language::new(domain);
        for entry in &self.functions {
            let f = CostFunction::new(domain, entry.arity, parse_all(&entry.table)?)?;
            lang.push(entry.name.clone(), f)?;
        }
        Ok(lang)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub function: String,
    pub scope: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub nodes: usize,
    pub terms: Vec<TermEntry>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance<Rational>) -> Self {
        InstanceFile {
            nodes: inst.nodes(),
            terms: inst
                .terms()
                .iter()
                .map(|t| TermEntry {
                    function: inst.language().name(t.function).to_string(),
                    scope: t.scope.clone(),
                })
                .collect(),
        }
    }

    pub fn to_instance(&self, lang: Arc<Language<Rational>>) -> Result<Instance<Rational>> {
        let mut inst = Instance::new(lang, self.nodes);
        for t in &self.terms {
            inst.add_named_term(&t.function, t.scope.clone())?;
        }
        Ok(inst)
    }
}

/// Verification record attached to a lifted fractional polymorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transcript {
    pub seed_arity: usize,
    pub admits: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportEntry {
    pub weight: String,
    pub maps: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpolyFile {
    pub arity_in: usize,
    pub arity_out: usize,
    pub support: Vec<SupportEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<Transcript>,
}

/// The `d` with `d^arity = len`.
fn infer_domain(len: usize, arity: usize) -> Result<Domain> {
    let d = (1..=len.max(1))
        .take_while(|d| d.checked_pow(arity as u32).is_some_and(|p| p <= len))
        .find(|d| d.pow(arity as u32) == len)
        .ok_or_else(|| {
            CliError::Invalid(format!("table of length {len} is not d^{arity} for any domain size d"))
        })?;
    Ok(Domain::new(d)?)
}

impl FpolyFile {
    pub fn from_fpoly(rho: &FractionalPolymorphism<Rational>) -> Self {
        FpolyFile {
            arity_in: rho.arity_in(),
            arity_out: rho.arity_out(),
            support: rho
                .support()
                .iter()
                .map(|(g, w)| SupportEntry {
                    weight: format_rational(w),
                    maps: g.ops().iter().map(|op| op.table().to_vec()).collect(),
                })
                .collect(),
            transcript: None,
        }
    }

    pub fn to_fpoly(&self) -> Result<FractionalPolymorphism<Rational>> {
        if self.arity_in == 0 {
            return Err(CliError::Invalid("arity_in must be positive".into()));
        }
        let first = self
            .support
            .first()
            .and_then(|e| e.maps.first())
            .ok_or_else(|| CliError::Invalid("empty support".into()))?;
        let domain = infer_domain(first.len(), self.arity_in)?;
        let mut support = Vec::with_capacity(self.support.len());
        for entry in &self.support {
            if entry.maps.len() != self.arity_out {
                return Err(CliError::Invalid(format!(
                    "support entry has {} maps, arity_out is {}",
                    entry.maps.len(),
                    self.arity_out
                )));
            }
            let ops = entry
                .maps
                .iter()
                .map(|t| Operation::new(domain, self.arity_in, t.clone()))
                .collect::<vcsp_core::Result<Vec<_>>>()?;
            support.push((Mapping::new(ops)?, parse_rational(&entry.weight)?));
        }
        Ok(FractionalPolymorphism::new(support)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub meet: Vec<usize>,
    pub join: Vec<usize>,
}

impl PairFile {
    pub fn from_pair(pair: &MultimorphismPair) -> Self {
        PairFile {
            meet: pair.meet().table().to_vec(),
            join: pair.join().table().to_vec(),
        }
    }

    pub fn to_pair(&self) -> Result<MultimorphismPair> {
        let domain = infer_domain(self.meet.len(), 2)?;
        Ok(MultimorphismPair::new(
            Operation::new(domain, 2, self.meet.clone())?,
            Operation::new(domain, 2, self.join.clone())?,
        )?)
    }
}
