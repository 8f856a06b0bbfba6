//! The shipped table of identified simple groups.
//!
//! Entries are only trusted after the oracle in [`super::oracle`] has
//! rebuilt each group from its construction recipe, confirmed its order and
//! certified `max_alt_section` from both sides. The oracle log lives next to
//! the data file.

use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{FactorDescriptor, FactorKind};

const TABLE_JSON: &str = include_str!("../../data/simple_groups.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimpleTable {
    pub version: u32,
    pub entries: Vec<SimpleEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimpleEntry {
    pub name: String,
    pub order: u64,
    pub max_alt_section: usize,
    /// Separates this entry from an alternating group of the same order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disambiguator: Option<Disambiguator>,
    /// Recipe for a faithful action of a group `X` with `X/T` solvable.
    pub construction: serde_json::Value,
    /// Optional recipe for a subgroup of the construction, on the same
    /// points, whose factors exhibit the lower bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disambiguator {
    pub element_order: u64,
    pub present: bool,
}

impl SimpleEntry {
    pub fn descriptor(&self) -> FactorDescriptor {
        FactorDescriptor {
            kind: FactorKind::Identified {
                name: self.name.clone(),
            },
            order: BigUint::from(self.order),
            max_alt_section: Some(self.max_alt_section),
        }
    }
}

pub fn parse_table(text: &str) -> serde_json::Result<SimpleTable> {
    serde_json::from_str(text)
}

pub fn simple_table() -> &'static [SimpleEntry] {
    static TABLE: OnceLock<SimpleTable> = OnceLock::new();
    &TABLE
        .get_or_init(|| parse_table(TABLE_JSON).expect("bundled simple-group table parses"))
        .entries
}

pub fn table_version() -> u32 {
    static VERSION: OnceLock<u32> = OnceLock::new();
    *VERSION.get_or_init(|| parse_table(TABLE_JSON).map(|t| t.version).unwrap_or(0))
}
