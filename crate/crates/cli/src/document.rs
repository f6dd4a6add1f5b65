//! JSON file formats: lattice documents and custom filter families.

use std::path::Path;

use latrep::{FilterFamily, Lattice};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `{"elements": [...], "covers": [[lower, upper], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<[String; 2]>,
}

impl LatticeDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read_text(path)?)
    }

    pub fn to_lattice(&self) -> Result<Lattice, latrep::Error> {
        let covers: Vec<(&str, &str)> = self.covers.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        Lattice::new(&self.elements, &covers)
    }

    /// Canonical document: elements in index order, covers reduced to the
    /// Hasse diagram and sorted by index.
    pub fn from_lattice(lattice: &Lattice) -> Self {
        LatticeDocument {
            elements: lattice.names().to_vec(),
            covers: lattice
                .covers()
                .into_iter()
                .map(|(a, b)| [lattice.name(a).to_owned(), lattice.name(b).to_owned()])
                .collect(),
        }
    }

    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// A custom family file: a JSON list of element-name lists.
pub fn parse_family_sets(text: &str) -> Result<Vec<Vec<String>>, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// Serializes a family as sorted element-name lists in family order.
pub fn family_to_string(lattice: &Lattice, family: &FilterFamily) -> String {
    let sets: Vec<Vec<&str>> = family
        .filters()
        .iter()
        .map(|f| f.members().iter().map(|i| lattice.name(i)).collect())
        .collect();
    serde_json::to_string_pretty(&sets).expect("family serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_default_to_empty() {
        let doc = LatticeDocument::parse(r#"{"elements": ["x"]}"#).unwrap();
        assert_eq!(doc.to_lattice().unwrap().size(), 1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(LatticeDocument::parse(r#"{"elements": ["x"], "extra": 1}"#).is_err());
        assert!(LatticeDocument::parse(r#"{"elements": ["x"], "covers": [["x"]]}"#).is_err());
    }

    #[test]
    fn canonical_form_drops_redundant_covers() {
        let doc = LatticeDocument::parse(
            r#"{"elements": ["0", "m", "1"], "covers": [["m", "1"], ["0", "1"], ["0", "m"]]}"#,
        )
        .unwrap();
        let canon = LatticeDocument::from_lattice(&doc.to_lattice().unwrap());
        assert_eq!(
            canon.covers,
            vec![["0".to_owned(), "m".to_owned()], ["m".to_owned(), "1".to_owned()]]
        );
    }
}
