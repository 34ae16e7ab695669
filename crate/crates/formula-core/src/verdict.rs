use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Valuation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Sat,
    Unsat,
    Abort,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::Abort => "ABORT",
        })
    }
}

/// Named work and size counters. Ordered so serialized reports are deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Counters(BTreeMap<String, u64>);

impl Counters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: &str, amount: u64) {
        *self.0.entry(key.to_string()).or_insert(0) += amount;
    }

    pub fn set(&mut self, key: &str, value: u64) {
        self.0.insert(key.to_string(), value);
    }

    /// Keeps the larger of the stored and the given value.
    pub fn max(&mut self, key: &str, value: u64) {
        let slot = self.0.entry(key.to_string()).or_insert(0);
        *slot = (*slot).max(value);
    }

    pub fn get(&self, key: &str) -> u64 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    /// Adds every counter of `other` into `self`.
    pub fn merge(&mut self, other: &Counters) {
        for (k, v) in &other.0 {
            self.add(k, *v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Outcome of a decision procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Valuation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub abort_reason: Option<String>,
    pub counters: Counters,
}

impl Verdict {
    pub fn sat(witness: Option<Valuation>, counters: Counters) -> Self {
        Self {
            status: Status::Sat,
            witness,
            abort_reason: None,
            counters,
        }
    }

    pub fn unsat(counters: Counters) -> Self {
        Self {
            status: Status::Unsat,
            witness: None,
            abort_reason: None,
            counters,
        }
    }

    pub fn abort(reason: impl Into<String>, counters: Counters) -> Self {
        Self {
            status: Status::Abort,
            witness: None,
            abort_reason: Some(reason.into()),
            counters,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}
