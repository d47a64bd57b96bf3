//! Bundled PD codes for small alternating knots, with the Q-group labels
//! reported for their minimal diagrams, plus two kinked fixtures.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pdcode::PdCode;
use crate::permgroup::GroupLabel;

const BUNDLED: &str = include_str!("../data/catalog.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("no catalog entry named {0:?}")]
    NotFound(String),
    #[error("malformed catalog: {0}")]
    Malformed(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub pd: Vec<[u32; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_label: Option<GroupLabel>,
}

impl CatalogEntry {
    pub fn pd_code(&self) -> PdCode {
        PdCode::new(self.pd.clone()).with_name(self.name.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED).expect("bundled catalog parses")
    }

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let mut entries: Vec<CatalogEntry> = serde_json::from_str(text)?;
        entries.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(Catalog { entries })
    }

    pub fn lookup(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries
            .binary_search_by(|e| e.name.as_str().cmp(name))
            .map(|idx| &self.entries[idx])
            .map_err(|_| CatalogError::NotFound(name.to_string()))
    }

    pub fn list_entries(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }
}

pub fn lookup(name: &str) -> Result<CatalogEntry, CatalogError> {
    Catalog::bundled().lookup(name).cloned()
}

pub fn list_entries() -> Vec<String> {
    Catalog::bundled().list_entries().into_iter().map(String::from).collect()
}
