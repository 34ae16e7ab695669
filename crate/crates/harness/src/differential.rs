use std::fmt;

use cylinder::Label;
use formula_core::{brute_force_sat_with_cap, evaluate, exhaustive_sat, write_dimacs, CnfFormula, Counters, Status, Verdict};
use nested::{closed_antichain_bruteforce, column_antichain_bruteforce, decide, Combine, DecideConfig, Decision};
use pivot_transform::certify_equisat;
use serde::{Serialize, Serializer};

use crate::{probe_decision, BoundRow, CampaignConfig};

/// The pipeline verdict equals the oracle verdict.
pub const CLAIM_VERDICT: &str = "verdict";
/// A SAT verdict comes with a model of the input.
pub const CLAIM_WITNESS: &str = "sat-witness";
/// Linearized columns admit a compatible antichain iff the closed digraph does.
pub const CLAIM_COLUMNS: &str = "column-antichains";
/// The layered nested search agrees with brute force over the columns.
pub const CLAIM_SEARCH: &str = "layered-search";
/// The pivot transform is equisatisfiable with its input.
pub const CLAIM_EQUISAT: &str = "equisat-transform";
/// Backtracking oracle agrees with plain enumeration.
pub const CLAIM_ORACLE: &str = "oracle-self-check";
/// Cylinder size `|E| ≤ |Lit|²`.
pub const CLAIM_CYLINDER: &str = "cylinder-size";
/// Lifting and multiplication stay within the rewrite budget.
pub const CLAIM_LIFTING: &str = "lifting-cost";
/// Each maximal nested filter stays within `|V|⁶` steps.
pub const CLAIM_FILTER: &str = "nested-filter";

/// Largest atom count the enumeration cross-check is run on.
const ENUMERATION_LIMIT: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    VerdictMismatch,
    PropertyViolation,
    BoundBreach,
    Abort,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FindingKind::VerdictMismatch => "verdict-mismatch",
            FindingKind::PropertyViolation => "property-violation",
            FindingKind::BoundBreach => "bound-breach",
            FindingKind::Abort => "abort",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimResult {
    Pass,
    Fail,
    Untested,
}

/// What identifies a finding when re-running a smaller instance.
pub type FindingKey = (FindingKind, String, Status, Status);

fn as_dimacs<S: Serializer>(f: &CnfFormula, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&write_dimacs(f))
}

fn as_dimacs_opt<S: Serializer>(f: &Option<CnfFormula>, s: S) -> Result<S::Ok, S::Error> {
    match f {
        Some(f) => s.serialize_some(&write_dimacs(f)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub claim: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(serialize_with = "as_dimacs")]
    pub instance: CnfFormula,
    #[serde(serialize_with = "as_dimacs_opt", skip_serializing_if = "Option::is_none")]
    pub minimized: Option<CnfFormula>,
    pub oracle: Status,
    pub pipeline: Status,
    pub stage: String,
    pub detail: String,
    pub counters: Counters,
}

impl Finding {
    pub fn key(&self) -> FindingKey {
        (self.kind, self.claim.clone(), self.oracle, self.pipeline)
    }

    /// The smallest instance known to trigger this finding.
    pub fn smallest(&self) -> &CnfFormula {
        self.minimized.as_ref().unwrap_or(&self.instance)
    }
}

/// Settings for one differential run.
#[derive(Debug, Clone, Copy)]
pub struct DiffOptions {
    pub oracle_cap: u32,
    pub transform_cap: u32,
    pub budget_scale: f64,
    pub combine: Combine,
    pub chain_cap: usize,
    pub properties: bool,
}

impl Default for DiffOptions {
    fn default() -> Self {
        DiffOptions::from(&CampaignConfig::default())
    }
}

impl From<&CampaignConfig> for DiffOptions {
    fn from(cfg: &CampaignConfig) -> Self {
        Self {
            oracle_cap: cfg.oracle_cap,
            transform_cap: cfg.transform_cap,
            budget_scale: cfg.budget_scale,
            combine: cfg.combine,
            chain_cap: cfg.chain_cap,
            properties: cfg.properties,
        }
    }
}

/// Everything measured on one instance.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceResult {
    pub atoms: u32,
    pub clauses: usize,
    pub oracle: Status,
    pub pipeline: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abort_reason: Option<String>,
    pub claims: Vec<(String, ClaimResult)>,
    #[serde(skip)]
    pub bounds: Vec<BoundRow>,
    #[serde(skip)]
    pub findings: Vec<Finding>,
}

impl InstanceResult {
    pub fn agrees(&self) -> bool {
        self.oracle == self.pipeline && self.oracle != Status::Abort
    }

    pub fn claim(&self, name: &str) -> ClaimResult {
        self.claims
            .iter()
            .find(|(c, _)| c == name)
            .map(|(_, r)| *r)
            .unwrap_or(ClaimResult::Untested)
    }
}

fn finding(kind: FindingKind, claim: &str, f: &CnfFormula, oracle: &Verdict, pipeline: &Verdict, stage: &str, detail: String) -> Finding {
    Finding {
        kind,
        claim: claim.to_string(),
        index: None,
        seed: None,
        instance: f.clone(),
        minimized: None,
        oracle: oracle.status,
        pipeline: pipeline.status,
        stage: stage.to_string(),
        detail,
        counters: pipeline.counters.clone(),
    }
}

/// Compares a pipeline verdict with the oracle verdict: the verdict claim, the witness
/// claim, and an abort finding when the pipeline gave up.
pub fn judge_verdict(f: &CnfFormula, oracle: &Verdict, pipeline: &Verdict) -> (Vec<(String, ClaimResult)>, Vec<Finding>) {
    let mut claims = Vec::new();
    let mut findings = Vec::new();
    match (oracle.status, pipeline.status) {
        (Status::Abort, _) => {
            claims.push((CLAIM_VERDICT.to_string(), ClaimResult::Untested));
            findings.push(finding(FindingKind::Abort, CLAIM_VERDICT, f, oracle, pipeline, "oracle", "oracle cap".into()));
        }
        (_, Status::Abort) => {
            claims.push((CLAIM_VERDICT.to_string(), ClaimResult::Untested));
            let reason = pipeline.abort_reason.clone().unwrap_or_default();
            let stage = if reason.starts_with("nested") { "nested" } else { "linearize" };
            findings.push(finding(FindingKind::Abort, CLAIM_VERDICT, f, oracle, pipeline, stage, reason));
        }
        (o, p) if o == p => claims.push((CLAIM_VERDICT.to_string(), ClaimResult::Pass)),
        (o, p) => {
            claims.push((CLAIM_VERDICT.to_string(), ClaimResult::Fail));
            findings.push(finding(
                FindingKind::VerdictMismatch,
                CLAIM_VERDICT,
                f,
                oracle,
                pipeline,
                "decide",
                format!("oracle {o}, pipeline {p}"),
            ));
        }
    }
    let witness = if oracle.status == Status::Sat && pipeline.status == Status::Sat {
        let ok = pipeline.witness.as_ref().is_some_and(|w| evaluate(f, w).unwrap_or(false));
        if !ok {
            findings.push(finding(
                FindingKind::PropertyViolation,
                CLAIM_WITNESS,
                f,
                oracle,
                pipeline,
                "witness",
                if pipeline.witness.is_some() { "witness is not a model".into() } else { "no witness".into() },
            ));
        }
        if ok { ClaimResult::Pass } else { ClaimResult::Fail }
    } else {
        ClaimResult::Untested
    };
    claims.push((CLAIM_WITNESS.to_string(), witness));
    (claims, findings)
}

/// Per-closed-digraph checks: the layered search against brute force over the columns,
/// and the columns against brute force over the chains of the closed digraph.
fn property_claims(d: &Decision, chain_cap: usize) -> (ClaimResult, ClaimResult, String) {
    let mut search = ClaimResult::Untested;
    let mut columns = ClaimResult::Untested;
    let mut detail = Vec::new();
    let merge = |acc: &mut ClaimResult, r: ClaimResult| {
        *acc = match (*acc, r) {
            (ClaimResult::Fail, _) | (_, ClaimResult::Fail) => ClaimResult::Fail,
            (ClaimResult::Pass, _) | (_, ClaimResult::Pass) => ClaimResult::Pass,
            _ => ClaimResult::Untested,
        }
    };
    for (i, (lin, out)) in d.linearized.iter().zip(&d.searches).enumerate() {
        let cols: Vec<Vec<Label>> = lin.columns.iter().map(|c| c.labels.clone()).collect();
        let brute = column_antichain_bruteforce(&cols).is_some();
        let meets_each = out.antichain.as_ref().map_or(true, |ids| {
            ids.len() == out.num_columns && ids.iter().enumerate().all(|(c, &e)| out.column_of[e] == c)
        });
        let search_ok = out.found() == brute && meets_each && (!out.found() || out.antichain_is_compatible());
        merge(&mut search, if search_ok { ClaimResult::Pass } else { ClaimResult::Fail });
        if !search_ok {
            detail.push(format!("closed digraph {i}: layered search {} vs brute force {brute}", out.found()));
        }
        match closed_antichain_bruteforce(&d.closed[i].graph, chain_cap) {
            Ok(a) => {
                let ok = a.is_some() == brute;
                merge(&mut columns, if ok { ClaimResult::Pass } else { ClaimResult::Fail });
                if !ok {
                    detail.push(format!(
                        "closed digraph {i} (nec {}): chains {} antichain, columns {}",
                        d.closed[i].nec.map(|l| l.to_string()).unwrap_or_default(),
                        if a.is_some() { "have an" } else { "have no" },
                        if brute { "have one" } else { "have none" },
                    ));
                }
            }
            Err(_) => {}
        }
    }
    (search, columns, detail.join("; "))
}

/// Runs the oracle and the pipeline on `f` and records every claim, bound row and finding.
pub fn run_differential(f: &CnfFormula, opts: &DiffOptions) -> InstanceResult {
    let oracle = brute_force_sat_with_cap(f, opts.oracle_cap);
    let cfg = DecideConfig {
        combine: opts.combine,
        budget_scale: opts.budget_scale,
        witness: true,
    };
    let d = decide(f, &cfg);
    let pipeline = &d.verdict;
    let (mut claims, mut findings) = judge_verdict(f, &oracle, pipeline);

    if opts.properties {
        let (search, columns, detail) = property_claims(&d, opts.chain_cap);
        for (claim, r, stage) in [(CLAIM_SEARCH, search, "nested"), (CLAIM_COLUMNS, columns, "linearize")] {
            claims.push((claim.to_string(), r));
            if r == ClaimResult::Fail {
                findings.push(finding(FindingKind::PropertyViolation, claim, f, &oracle, pipeline, stage, detail.clone()));
            }
        }

        let cert = certify_equisat(f, &d.pivoted, opts.transform_cap);
        let equisat = if cert.abort_reason.is_some() {
            ClaimResult::Untested
        } else if cert.agree {
            ClaimResult::Pass
        } else {
            findings.push(finding(
                FindingKind::PropertyViolation,
                CLAIM_EQUISAT,
                f,
                &oracle,
                pipeline,
                "transform",
                format!("input {}, pivoted {}", cert.original_status, cert.pivoted_status),
            ));
            ClaimResult::Fail
        };
        claims.push((CLAIM_EQUISAT.to_string(), equisat));

        let self_check = if oracle.status == Status::Abort || f.num_atoms() > ENUMERATION_LIMIT {
            ClaimResult::Untested
        } else if exhaustive_sat(f).is_some() == (oracle.status == Status::Sat) {
            ClaimResult::Pass
        } else {
            findings.push(finding(FindingKind::PropertyViolation, CLAIM_ORACLE, f, &oracle, pipeline, "oracle", "enumeration disagrees".into()));
            ClaimResult::Fail
        };
        claims.push((CLAIM_ORACLE.to_string(), self_check));
    }

    let bounds = probe_decision(&d);
    for row in &bounds {
        claims.push((row.claim.clone(), row.status));
        if row.status == ClaimResult::Fail {
            findings.push(finding(
                FindingKind::BoundBreach,
                &row.claim,
                f,
                &oracle,
                pipeline,
                if row.claim == CLAIM_FILTER { "nested" } else if row.claim == CLAIM_LIFTING { "linearize" } else { "cylinder" },
                format!("measured {} > bound {}", row.measured, row.bound),
            ));
        }
    }

    InstanceResult {
        atoms: f.num_atoms(),
        clauses: f.num_clauses(),
        oracle: oracle.status,
        pipeline: pipeline.status,
        abort_reason: pipeline.abort_reason.clone(),
        claims,
        bounds,
        findings,
    }
}
