use std::collections::BTreeMap;

use formula_core::Status;
use rayon::prelude::*;
use serde::Serialize;

use crate::{
    completion_suite, equisat_suite, generate_random_3cnf, instance_seeds, run_differential, shrink, structural_suite,
    three_way_suite, two_sat_suite, BoundRow, CampaignConfig, ClaimResult, DiffOptions, Finding, FindingKind,
    HarnessError, InstanceResult, Suite, SuiteReport, CLAIM_EQUISAT, CLAIM_ORACLE,
};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub instances: usize,
    pub agreements: usize,
    pub mismatches: usize,
    pub aborts: usize,
    pub findings: usize,
    pub minimized: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScoreRow {
    pub claim: String,
    pub pass: usize,
    pub fail: usize,
    pub untested: usize,
}

/// Compact per-instance record kept in the report.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceRow {
    pub index: usize,
    pub seed: u64,
    pub atoms: u32,
    pub clauses: usize,
    pub oracle: Status,
    pub pipeline: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub totals: Totals,
    /// Instance counts keyed by `oracle/pipeline` status.
    pub outcomes: BTreeMap<String, usize>,
    pub agreement_rate: f64,
    pub scoreboard: Vec<ScoreRow>,
    pub findings: Vec<Finding>,
    pub instances: Vec<InstanceRow>,
    pub bound_rows: Vec<BoundRow>,
    pub suites: Vec<SuiteReport>,
}

impl CampaignReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn scoreboard_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.scoreboard {
            w.serialize(row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }

    pub fn bound_rows_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "claim", "measured", "bound", "status", "linear_ratio"]).expect("in-memory csv");
        for r in &self.bound_rows {
            w.write_record([
                r.index.map(|i| i.to_string()).unwrap_or_default(),
                r.claim.clone(),
                r.measured.to_string(),
                r.bound.to_string(),
                format!("{:?}", r.status).to_lowercase(),
                r.linear_ratio.map(|x| format!("{x:.4}")).unwrap_or_default(),
            ])
            .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }

    pub fn score(&self, claim: &str) -> Option<&ScoreRow> {
        self.scoreboard.iter().find(|r| r.claim == claim)
    }

    /// Bound rows that failed.
    pub fn breaches(&self) -> impl Iterator<Item = &BoundRow> {
        self.bound_rows.iter().filter(|r| r.status == ClaimResult::Fail)
    }
}

/// Runs the configured suites. The differential suite generates `instances` formulas from
/// the seed stream, runs them in parallel and merges results in index order; findings are
/// shrunk when `shrink` is set.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, HarnessError> {
    cfg.validate()?;
    let opts = DiffOptions::from(cfg);
    let mut report = CampaignReport {
        config: cfg.clone(),
        totals: Totals::default(),
        outcomes: BTreeMap::new(),
        agreement_rate: 0.0,
        scoreboard: Vec::new(),
        findings: Vec::new(),
        instances: Vec::new(),
        bound_rows: Vec::new(),
        suites: Vec::new(),
    };

    if cfg.runs(Suite::Differential) {
        let seeds = instance_seeds(cfg.seed, cfg.instances);
        let results: Vec<(usize, u64, InstanceResult)> = seeds
            .par_iter()
            .enumerate()
            .map(|(i, &seed)| {
                let f = generate_random_3cnf(cfg, seed).expect("validated config");
                (i, seed, run_differential(&f, &opts))
            })
            .collect();

        let mut board: BTreeMap<String, ScoreRow> = BTreeMap::new();
        let mut findings = Vec::new();
        for (i, seed, r) in results {
            report.totals.instances += 1;
            if r.agrees() {
                report.totals.agreements += 1;
            } else if r.pipeline == Status::Abort || r.oracle == Status::Abort {
                report.totals.aborts += 1;
            } else {
                report.totals.mismatches += 1;
            }
            *report.outcomes.entry(format!("{}/{}", r.oracle, r.pipeline)).or_default() += 1;
            for (claim, res) in &r.claims {
                let row = board.entry(claim.clone()).or_insert_with(|| ScoreRow {
                    claim: claim.clone(),
                    ..ScoreRow::default()
                });
                match res {
                    ClaimResult::Pass => row.pass += 1,
                    ClaimResult::Fail => row.fail += 1,
                    ClaimResult::Untested => row.untested += 1,
                }
            }
            if cfg.strict {
                for claim in [CLAIM_EQUISAT, CLAIM_ORACLE] {
                    if r.claim(claim) == ClaimResult::Fail {
                        return Err(HarnessError::Strict(format!("{claim} failed on instance {i} (seed {seed})")));
                    }
                }
            }
            for mut row in r.bounds {
                row.index = Some(i);
                report.bound_rows.push(row);
            }
            for mut f in r.findings {
                f.index = Some(i);
                f.seed = Some(seed);
                findings.push(f);
            }
            report.instances.push(InstanceRow {
                index: i,
                seed,
                atoms: r.atoms,
                clauses: r.clauses,
                oracle: r.oracle,
                pipeline: r.pipeline,
            });
        }
        report.scoreboard = board.into_values().collect();
        report.agreement_rate = if report.totals.instances == 0 {
            1.0
        } else {
            report.totals.agreements as f64 / report.totals.instances as f64
        };
        if cfg.shrink {
            findings = findings
                .par_iter()
                .map(|f| shrink(f, &opts))
                .collect::<Result<Vec<_>, _>>()?;
            report.totals.minimized = findings.iter().filter(|f| f.minimized.is_some()).count();
        }
        log::info!(
            "campaign: {} instances, {} agree, {} mismatches, {} aborts, {} findings",
            report.totals.instances,
            report.totals.agreements,
            report.totals.mismatches,
            report.totals.aborts,
            findings.len()
        );
        report.totals.findings = findings.len();
        report.findings = findings;
    }

    let n = cfg.instances;
    for suite in &cfg.suites {
        match suite {
            Suite::Differential => {}
            Suite::TwoSat => report.suites.push(two_sat_suite(cfg.seed, n)),
            Suite::Equisat => report.suites.push(equisat_suite(cfg.seed, n, cfg.max_atoms.max(3), cfg.transform_cap)),
            Suite::Completion => report.suites.push(completion_suite(cfg.seed, n, cfg.transform_cap)),
            Suite::Structural => report.suites.extend(structural_suite(cfg.seed, n, cfg.budget_scale)),
            Suite::ThreeWay => report.suites.push(three_way_suite(cfg.seed, n, cfg.chain_cap)),
        }
    }
    if cfg.strict {
        if let Some(s) = report.suites.iter().find(|s| s.strict && s.failures > 0) {
            return Err(HarnessError::Strict(format!("suite {} has {} failures", s.name, s.failures)));
        }
    }
    Ok(report)
}

/// Findings of one kind.
pub fn findings_of(report: &CampaignReport, kind: FindingKind) -> impl Iterator<Item = &Finding> {
    report.findings.iter().filter(move |f| f.kind == kind)
}
