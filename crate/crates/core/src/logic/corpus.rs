//! Named formula lists with an expected classification.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::eval::is_identity;
use super::formula::Formula;
use super::ipc::ipc_prove;
use crate::brouwer::from_upsets;
use crate::error::{Error, Result};
use crate::order::{chain, fork};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expect {
    #[serde(rename = "IPC")]
    Ipc,
    #[serde(rename = "CPC-not-IPC")]
    CpcNotIpc,
    /// Classically valid, not intuitionistic, and an identity exactly when
    /// the top is join-irreducible (the weak excluded middle family).
    #[serde(rename = "JAN-marker")]
    JanMarker,
    #[serde(rename = "free")]
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub formula: String,
    pub expect: Expect,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    formulas: Vec<Formula>,
}

const STANDARD: &str = include_str!("../../corpus/standard.json");

impl Corpus {
    pub fn new(entries: Vec<CorpusEntry>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some(e) = entries.iter().find(|e| !seen.insert(e.name.as_str())) {
            return Err(Error::PreconditionFailed(format!("duplicate corpus name `{}`", e.name)));
        }
        let formulas = entries.iter().map(|e| Formula::parse(&e.formula)).collect::<Result<_>>()?;
        Ok(Corpus { entries, formulas })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(serde_json::from_str(text)?)
    }

    /// The bundled corpus.
    pub fn standard() -> Self {
        Self::from_json(STANDARD).expect("bundled corpus is well formed")
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CorpusEntry, &Formula)> {
        self.entries.iter().zip(&self.formulas)
    }

    /// `(name, formula)` pairs.
    pub fn named(&self) -> Vec<(String, Formula)> {
        self.iter().map(|(e, f)| (e.name.clone(), f.clone())).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("serializable")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub name: String,
    pub formula: String,
    pub expect: Expect,
    pub ipc: bool,
    pub classical: bool,
    /// Identity of the three-element chain algebra.
    pub chain3: bool,
    /// Identity of the up-sets of the fork.
    pub fork: bool,
    pub consistent: bool,
}

/// Checks each entry's classification against the prover, truth tables and
/// two small algebras.
pub fn run_corpus(corpus: &Corpus) -> Result<Vec<CorpusRow>> {
    let c3 = from_upsets(&chain(2)?)?;
    let fk = from_upsets(&fork())?;
    corpus
        .iter()
        .map(|(e, f)| {
            let ipc = ipc_prove(f)?;
            let classical = f.is_tautology()?;
            let chain3 = is_identity(&c3, f)?.holds;
            let fork = is_identity(&fk, f)?.holds;
            let consistent = match e.expect {
                Expect::Ipc => ipc,
                Expect::CpcNotIpc => classical && !ipc,
                Expect::JanMarker => classical && !ipc && chain3 && !fork,
                Expect::Free => true,
            };
            Ok(CorpusRow { name: e.name.clone(), formula: f.to_string(), expect: e.expect, ipc, classical, chain3, fork, consistent })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_corpus_is_consistent() {
        let c = Corpus::standard();
        assert!(c.len() >= 20);
        for row in run_corpus(&c).unwrap() {
            assert!(row.consistent, "{row:?}");
        }
    }

    #[test]
    fn duplicate_names_rejected() {
        let e = CorpusEntry { name: "a".into(), formula: "p1".into(), expect: Expect::Free };
        assert!(Corpus::new(vec![e.clone(), e]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = Corpus::standard();
        assert_eq!(Corpus::from_json(&c.to_json()).unwrap(), c);
    }
}
