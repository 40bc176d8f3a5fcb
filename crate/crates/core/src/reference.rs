//! Published subspace-count rows for the quadratic APN families in dimension 12.
//!
//! Families whose members are not all EA-equivalent list several rows; a
//! computed profile matches when it equals any of them.

use serde::{Deserialize, Serialize};

use crate::families::FamilyId;

const EMBEDDED: &str = include_str!("../data/expected_nf.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedRow {
    pub family: FamilyId,
    pub accepted: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedTable {
    pub version: u32,
    pub n: u32,
    pub rows: Vec<ExpectedRow>,
}

impl ExpectedTable {
    /// The fixture compiled into the crate.
    pub fn embedded() -> Self {
        serde_json::from_str(EMBEDDED).expect("embedded fixture is valid JSON")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn row(&self, family: FamilyId) -> Option<&ExpectedRow> {
        self.rows.iter().find(|r| r.family == family)
    }

    /// `None` when the family has no expected row.
    pub fn matches(&self, family: FamilyId, nf: &[u64]) -> Option<bool> {
        self.row(family)
            .map(|r| r.accepted.iter().any(|row| row.as_slice() == nf))
    }

    pub fn families(&self) -> Vec<FamilyId> {
        self.rows.iter().map(|r| r.family).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixture_loads() {
        let t = ExpectedTable::embedded();
        assert_eq!(t.n, 12);
        assert_eq!(t.rows.len(), 14);
        assert_eq!(
            t.matches(FamilyId::F1, &[1365, 100100, 140664]),
            Some(true)
        );
        assert_eq!(t.matches(FamilyId::F1, &[1365, 100100]), Some(false));
        assert_eq!(t.matches(FamilyId::Lzlq, &[1]), None);
    }
}
