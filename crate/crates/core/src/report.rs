//! Data model for verification results: one entry per checked identity
//! instance, shared by the library check functions and the CLI's JSON
//! report. Entries are plain data; all maps are ordered so serialization
//! is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::padic::number::Depth;

/// Outcome of one check. `Refused` marks instances where preconditions or
/// the precision floor prevent an honest verdict; refusals are never
/// counted as failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Refused,
}

/// One verified identity instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckEntry {
    /// Stable identifier: check family plus instance tag.
    pub id: String,
    /// The mathematical identity under test, written out.
    pub identity: String,
    /// Conventions in force: branch tags, log and valuation normalizations,
    /// prime and root labelings.
    pub conventions: String,
    /// Instance inputs (character, prime, level, precision, ...).
    pub inputs: BTreeMap<String, String>,
    /// Left side, serialized p-adic digits.
    pub lhs: String,
    /// Right side, serialized p-adic digits.
    pub rhs: String,
    /// Agreement depth of the two sides (p-adic digits).
    pub depth: i64,
    /// Whether the comparison used up the whole working window.
    pub saturated: bool,
    pub status: Status,
    /// How each side was produced; this chain is the independence argument.
    pub provenance: Vec<String>,
}

impl CheckEntry {
    /// Package a two-sided comparison, passing when the agreement depth
    /// reaches `floor` or the window saturates.
    #[allow(clippy::too_many_arguments)]
    pub fn comparison(
        id: impl Into<String>,
        identity: impl Into<String>,
        conventions: impl Into<String>,
        inputs: BTreeMap<String, String>,
        lhs: String,
        rhs: String,
        depth: Depth,
        floor: i64,
        provenance: Vec<String>,
    ) -> CheckEntry {
        let status = if depth.saturated || depth.depth >= floor { Status::Pass } else { Status::Fail };
        CheckEntry {
            id: id.into(),
            identity: identity.into(),
            conventions: conventions.into(),
            inputs,
            lhs,
            rhs,
            depth: depth.depth,
            saturated: depth.saturated,
            status,
            provenance,
        }
    }

    /// Package a refusal: the instance is reported with a reason instead of
    /// a verdict.
    pub fn refusal(
        id: impl Into<String>,
        identity: impl Into<String>,
        inputs: BTreeMap<String, String>,
        reason: impl Into<String>,
    ) -> CheckEntry {
        CheckEntry {
            id: id.into(),
            identity: identity.into(),
            conventions: reason.into(),
            inputs,
            lhs: String::new(),
            rhs: String::new(),
            depth: 0,
            saturated: false,
            status: Status::Refused,
            provenance: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Convenience for building the `inputs` map in declaration order.
pub fn inputs(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
