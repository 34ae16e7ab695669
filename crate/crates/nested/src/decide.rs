use std::fmt;
use std::str::FromStr;

use cylinder::{build_closed_digraphs, build_cylinder, ClosedDigraph, Label};
use formula_core::{evaluate, solve_2sat, Counters, CnfFormula, Literal, Status, Valuation, Verdict};
use linearize::{linearize, Linearized, LinearizeError};
use pivot_transform::{complete, pivoted_to_cnf, to_pivoted, Entry, Polarity, PivotedFormula};
use serde::{Deserialize, Serialize};

use crate::{lin_search, LinOutcome, NestedError};

/// How per-closed-digraph results combine into a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combine {
    /// UNSAT only when no closed digraph has a compatible antichain.
    All,
    /// UNSAT as soon as one closed digraph has none.
    Any,
}

impl FromStr for Combine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Combine::All),
            "any" => Ok(Combine::Any),
            other => Err(format!("unknown combine rule {other:?} (expected all or any)")),
        }
    }
}

impl fmt::Display for Combine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Combine::All => "all",
            Combine::Any => "any",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DecideConfig {
    pub combine: Combine,
    pub budget_scale: f64,
    pub witness: bool,
}

impl Default for DecideConfig {
    fn default() -> Self {
        Self {
            combine: Combine::All,
            budget_scale: 1.0,
            witness: true,
        }
    }
}

/// What happened on one closed digraph.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedReport {
    pub nec: String,
    pub vertices: usize,
    pub edges: usize,
    pub columns: usize,
    pub antichain: Option<bool>,
    pub abort: Option<String>,
    /// Counted rewrites against the lifting budget.
    pub rewrites: u64,
    pub rewrite_budget: u64,
    /// Worst nested filter call as `(work, |V|⁶)`.
    pub filter_work: Option<(u64, u64)>,
}

/// Every stage of one run, kept for tracing and for the bound probes.
#[derive(Debug, Clone)]
pub struct Decision {
    pub verdict: Verdict,
    pub pivoted: PivotedFormula,
    pub closed: Vec<ClosedDigraph>,
    pub linearized: Vec<Linearized>,
    pub searches: Vec<LinOutcome>,
    pub reports: Vec<ClosedReport>,
}

/// Decides `f` through the pivot transform, the cylinder, linearization and the layered
/// antichain search.
pub fn decide(f: &CnfFormula, cfg: &DecideConfig) -> Decision {
    let pf = complete(&to_pivoted(f));
    let mut d = decide_pivoted(&pf, cfg);
    if let Some(w) = d.verdict.witness.take() {
        let w = w.restrict(f.num_atoms());
        if evaluate(f, &w).unwrap_or(false) {
            d.verdict.witness = Some(w);
        } else {
            d.verdict.counters.set("decide.witness_failed", 1);
        }
    }
    d
}

/// Same as [`decide`] on an already pivoted formula (completed first if needed).
pub fn decide_pivoted(pf: &PivotedFormula, cfg: &DecideConfig) -> Decision {
    let pf = complete(pf);
    let mut counters = Counters::new();
    counters.set("pivot.m", pf.m() as u64);
    counters.set("pivot.atoms", pf.num_atoms() as u64);
    let cyl = build_cylinder(&pf).expect("completed formula");
    counters.set("cylinder.vertices", cyl.num_vertices() as u64);
    counters.set("cylinder.edges", cyl.num_edges() as u64);
    let closed = build_closed_digraphs(&cyl);
    counters.set("closed.count", closed.len() as u64);

    let mut d = Decision {
        verdict: Verdict::sat(None, Counters::new()),
        pivoted: pf.clone(),
        closed: closed.clone(),
        linearized: Vec::new(),
        searches: Vec::new(),
        reports: Vec::new(),
    };

    let mut status = if closed.is_empty() { Status::Sat } else { match cfg.combine {
        Combine::All => Status::Unsat,
        Combine::Any => Status::Sat,
    } };
    let mut abort: Option<String> = None;
    let mut found: Option<Label> = None;

    for c in &closed {
        let mut report = ClosedReport {
            nec: c.nec.map(|a| a.to_string()).unwrap_or_default(),
            vertices: c.num_vertices(),
            edges: c.num_edges(),
            columns: 0,
            antichain: None,
            abort: None,
            rewrites: 0,
            rewrite_budget: 0,
            filter_work: None,
        };
        counters.max("closed.max_vertices", c.num_vertices() as u64);
        counters.max("closed.max_edges", c.num_edges() as u64);
        let lin = match linearize(c, pf.m(), cfg.budget_scale) {
            Ok(lin) => lin,
            Err(e @ LinearizeError::Blowup { rewrites, budget }) => {
                report.rewrites = rewrites;
                report.rewrite_budget = budget;
                report.abort = Some(e.to_string());
                abort = report.abort.clone();
                d.reports.push(report);
                break;
            }
        };
        report.rewrites = lin.counters.get("lin.rewrites");
        report.rewrite_budget = lin.counters.get("lin.budget");
        for (k, v) in lin.counters.iter() {
            if k.starts_with("lin.max") || k == "lin.budget" {
                counters.max(k, v);
            } else {
                counters.add(k, v);
            }
        }
        report.columns = lin.columns.len();
        let cols: Vec<Vec<Label>> = lin.columns.iter().map(|c| c.labels.clone()).collect();
        let search = match lin_search(&cols) {
            Ok(s) => s,
            Err(e @ NestedError::FilterBlowup { work, cap }) => {
                report.filter_work = Some((work, cap));
                report.abort = Some(e.to_string());
                abort = report.abort.clone();
                d.reports.push(report);
                d.linearized.push(lin);
                break;
            }
        };
        report.filter_work = search.peak_filter;
        for (k, v) in search.counters.iter() {
            if k.starts_with("nested.max") {
                counters.max(k, v);
            } else {
                counters.add(k, v);
            }
        }
        report.antichain = Some(search.found());
        let has = search.found();
        if has && found.is_none() {
            found = search.antichain_label();
        }
        d.reports.push(report);
        d.linearized.push(lin);
        d.searches.push(search);
        match (cfg.combine, has) {
            (Combine::All, true) => {
                status = Status::Sat;
                break;
            }
            (Combine::Any, false) => {
                status = Status::Unsat;
                break;
            }
            _ => {}
        }
    }

    d.verdict = match (abort, status) {
        (Some(reason), _) => Verdict::abort(&reason, counters),
        (None, Status::Unsat) => Verdict::unsat(counters),
        (None, _) => {
            let mut v = Verdict::sat(None, counters);
            if cfg.witness {
                match witness_from_label(&pf, found.as_ref()) {
                    Some(w) => v.witness = Some(w),
                    None => v.counters.set("decide.witness_failed", 1),
                }
            }
            v
        }
    };
    d
}

/// Picks, per pivot, the block whose entry avoids `label`, solves the 2-CNF of the chosen
/// blocks and sets each pivot so its chosen block is the one that must hold. `None` when
/// the chosen blocks are unsatisfiable.
pub fn witness_from_label(pf: &PivotedFormula, label: Option<&Label>) -> Option<Valuation> {
    let empty = Label::new();
    let label = label.unwrap_or(&empty);
    let mut lists: Vec<Vec<Literal>> = Vec::new();
    let mut pivot_values = Vec::new();
    for i in 1..=pf.m() {
        let entry = if label.contains(&Entry::pos(i)) { Entry::neg(i) } else { Entry::pos(i) };
        for pair in &pf.block(entry).pairs {
            lists.push(pair.literals().to_vec());
        }
        pivot_values.push((pf.pivot_atom(i), entry.polarity == Polarity::Negative));
    }
    let active = CnfFormula::from_literal_lists(pf.num_atoms(), &lists).ok()?;
    let outcome = solve_2sat(&active).ok()?;
    let mut model = outcome.verdict.witness?;
    for (atom, value) in pivot_values {
        model.set(atom, value);
    }
    let cnf = pivoted_to_cnf(pf).ok()?;
    evaluate(&cnf, &model).ok()?.then_some(model)
}
