use formula_core::CnfFormula;
use nested::{decide, DecideConfig, Decision};
use serde::Serialize;

use crate::{ClaimResult, DiffOptions, CLAIM_CYLINDER, CLAIM_FILTER, CLAIM_LIFTING};

/// One measured quantity against its stated polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub claim: String,
    pub measured: u64,
    pub bound: u64,
    pub status: ClaimResult,
    /// For the lifting row: counted rewrites per input vertex or edge of the closed
    /// digraph, the quantity a linear cost would keep bounded.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_ratio: Option<f64>,
}

impl BoundRow {
    fn new(claim: &str, measured: u64, bound: u64) -> Self {
        Self {
            index: None,
            claim: claim.to_string(),
            measured,
            bound,
            status: if measured <= bound { ClaimResult::Pass } else { ClaimResult::Fail },
            linear_ratio: None,
        }
    }

    fn untested(claim: &str) -> Self {
        Self {
            index: None,
            claim: claim.to_string(),
            measured: 0,
            bound: 0,
            status: ClaimResult::Untested,
            linear_ratio: None,
        }
    }
}

fn worst<T: Copy>(items: impl Iterator<Item = (u64, u64, T)>) -> Option<(u64, u64, T)> {
    items.fold(None, |best, cur| match best {
        Some(b) if (b.0 as f64 / b.1.max(1) as f64) >= (cur.0 as f64 / cur.1.max(1) as f64) => Some(b),
        _ => Some(cur),
    })
}

/// Rows for the cylinder size, the lifting cost (worst closed digraph) and the nested
/// filter (worst call) of a finished or aborted run.
pub fn probe_decision(d: &Decision) -> Vec<BoundRow> {
    let c = &d.verdict.counters;
    let lits = c.get("cylinder.vertices");
    let mut rows = vec![BoundRow::new(CLAIM_CYLINDER, c.get("cylinder.edges"), lits * lits)];

    let lifting = worst(
        d.reports
            .iter()
            .filter(|r| r.rewrite_budget > 0)
            .map(|r| (r.rewrites, r.rewrite_budget, r.vertices + r.edges)),
    );
    rows.push(match lifting {
        Some((rewrites, budget, size)) => {
            let mut row = BoundRow::new(CLAIM_LIFTING, rewrites, budget);
            row.linear_ratio = Some(rewrites as f64 / size.max(1) as f64);
            row
        }
        None => BoundRow::untested(CLAIM_LIFTING),
    });

    let filter = worst(d.reports.iter().filter_map(|r| r.filter_work).map(|(w, cap)| (w, cap, ())));
    rows.push(match filter {
        Some((work, cap, ())) => BoundRow::new(CLAIM_FILTER, work, cap),
        None => BoundRow::untested(CLAIM_FILTER),
    });
    rows
}

/// Runs the pipeline on `f` and returns its bound rows.
pub fn probe_bounds(f: &CnfFormula, opts: &DiffOptions) -> Vec<BoundRow> {
    let cfg = DecideConfig {
        combine: opts.combine,
        budget_scale: opts.budget_scale,
        witness: false,
    };
    probe_decision(&decide(f, &cfg))
}
