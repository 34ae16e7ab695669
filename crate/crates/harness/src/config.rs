use std::fmt;
use std::str::FromStr;

use nested::Combine;
use serde::{Deserialize, Serialize};

use crate::{distinct_clauses, HarnessError};

/// A property suite a campaign can run besides the differential one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Differential,
    TwoSat,
    Equisat,
    Completion,
    Structural,
    ThreeWay,
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "differential" => Suite::Differential,
            "two-sat" => Suite::TwoSat,
            "equisat" => Suite::Equisat,
            "completion" => Suite::Completion,
            "structural" => Suite::Structural,
            "three-way" => Suite::ThreeWay,
            other => return Err(HarnessError::Config(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Differential => "differential",
            Suite::TwoSat => "two-sat",
            Suite::Equisat => "equisat",
            Suite::Completion => "completion",
            Suite::Structural => "structural",
            Suite::ThreeWay => "three-way",
        })
    }
}

/// Campaign settings. Read from TOML or from plain `key = value` lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub seed: u64,
    pub instances: usize,
    pub min_atoms: u32,
    pub max_atoms: u32,
    pub min_clauses: usize,
    pub max_clauses: usize,
    pub oracle_cap: u32,
    /// Atom cap for the oracle runs on expanded pivoted formulas.
    pub transform_cap: u32,
    pub budget_scale: f64,
    pub combine: Combine,
    pub chain_cap: usize,
    /// Per-closed-digraph property checks (column antichains, layered search).
    pub properties: bool,
    pub shrink: bool,
    pub strict: bool,
    pub suites: Vec<Suite>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            instances: 1000,
            min_atoms: 3,
            max_atoms: 10,
            min_clauses: 1,
            max_clauses: 30,
            oracle_cap: formula_core::DEFAULT_ORACLE_CAP,
            transform_cap: 128,
            budget_scale: 1.0,
            combine: Combine::All,
            chain_cap: 1 << 14,
            properties: true,
            shrink: true,
            strict: false,
            suites: vec![Suite::Differential],
        }
    }
}

impl CampaignConfig {
    /// Parses TOML, falling back to `key = value` lines with bare strings and
    /// comma-separated suite lists.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = match toml::from_str(text) {
            Ok(cfg) => cfg,
            Err(_) => toml::from_str(&lines_to_toml(text)?)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.min_atoms > self.max_atoms {
            return bad(format!("min_atoms {} > max_atoms {}", self.min_atoms, self.max_atoms));
        }
        if self.min_clauses > self.max_clauses {
            return bad(format!("min_clauses {} > max_clauses {}", self.min_clauses, self.max_clauses));
        }
        if self.min_clauses > distinct_clauses(self.min_atoms) {
            return bad(format!(
                "{} atoms allow only {} distinct 3-clauses, min_clauses is {}",
                self.min_atoms,
                distinct_clauses(self.min_atoms),
                self.min_clauses
            ));
        }
        if self.max_clauses > 0 && self.max_atoms < 3 {
            return bad("3-clauses need at least 3 atoms".into());
        }
        if self.max_atoms > self.oracle_cap {
            return bad(format!("max_atoms {} exceeds the oracle cap {}", self.max_atoms, self.oracle_cap));
        }
        if !(self.budget_scale.is_finite() && self.budget_scale > 0.0) {
            return bad(format!("budget_scale must be positive, got {}", self.budget_scale));
        }
        if self.chain_cap == 0 {
            return bad("chain_cap must be positive".into());
        }
        Ok(())
    }

    pub fn runs(&self, suite: Suite) -> bool {
        self.suites.contains(&suite)
    }
}

fn lines_to_toml(text: &str) -> Result<String, HarnessError> {
    let mut out = String::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(HarnessError::Config(format!("line {}: expected key = value", n + 1)));
        };
        let (key, value) = (key.trim(), value.trim());
        let value = if key == "suites" && !value.starts_with('[') {
            let items: Vec<String> = value.split(',').map(|s| format!("{:?}", s.trim())).collect();
            format!("[{}]", items.join(", "))
        } else if toml::from_str::<toml::Table>(&format!("v = {value}")).is_ok() {
            value.to_string()
        } else {
            format!("{value:?}")
        };
        out.push_str(&format!("{key} = {value}\n"));
    }
    Ok(out)
}
