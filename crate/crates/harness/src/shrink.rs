use std::collections::BTreeMap;

use formula_core::{Clause, CnfFormula, Literal};

use crate::{run_differential, DiffOptions, Finding, FindingKey, FindingKind, HarnessError};

fn options_for(key: &FindingKey, opts: &DiffOptions) -> DiffOptions {
    DiffOptions {
        properties: key.0 == FindingKind::PropertyViolation,
        ..*opts
    }
}

fn find(f: &CnfFormula, key: &FindingKey, opts: &DiffOptions) -> Option<Finding> {
    run_differential(f, &options_for(key, opts))
        .findings
        .into_iter()
        .find(|x| x.key() == *key)
}

/// True iff running `f` again yields a finding with the same kind, claim and verdicts.
pub fn reproduces(f: &CnfFormula, key: &FindingKey, opts: &DiffOptions) -> bool {
    find(f, key, opts).is_some()
}

/// Renumbers the atoms that occur to `1..=k` in order of first appearance.
pub fn compact_atoms(f: &CnfFormula) -> CnfFormula {
    let mut map = BTreeMap::new();
    for c in f.clauses() {
        for l in c.literals() {
            let next = map.len() as u32 + 1;
            map.entry(l.atom()).or_insert(next);
        }
    }
    let lists: Vec<Vec<Literal>> = f
        .clauses()
        .iter()
        .map(|c| c.literals().iter().map(|l| Literal::new(map[&l.atom()], l.is_negated()).expect("atom ≥ 1")).collect())
        .collect();
    CnfFormula::from_literal_lists(map.len() as u32, &lists).expect("renumbered clauses are valid")
}

fn without(f: &CnfFormula, i: usize) -> CnfFormula {
    let clauses: Vec<Clause> = f.clauses().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c.clone()).collect();
    CnfFormula::new(f.num_atoms(), clauses).expect("subset of valid clauses")
}

/// Greedy delta debugging: drop single clauses in order while the finding persists,
/// repeating until no single clause can go, then try compacting the atom numbering and
/// repeat. The result is 1-minimal with respect to clause deletion.
pub fn shrink(finding: &Finding, opts: &DiffOptions) -> Result<Finding, HarnessError> {
    let key = finding.key();
    let mut cur = finding.smallest().clone();
    if !reproduces(&cur, &key, opts) {
        return Err(HarnessError::NotReproducing(format!("{} / {}", finding.kind, finding.claim)));
    }
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < cur.num_clauses() {
            let next = without(&cur, i);
            if reproduces(&next, &key, opts) {
                cur = next;
                changed = true;
            } else {
                i += 1;
            }
        }
        let compact = compact_atoms(&cur);
        if compact != cur && reproduces(&compact, &key, opts) {
            cur = compact;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let fresh = find(&cur, &key, opts).expect("the loop only keeps reproducing instances");
    Ok(Finding {
        minimized: Some(cur),
        instance: finding.instance.clone(),
        index: finding.index,
        seed: finding.seed,
        ..fresh
    })
}

/// The minimized instance reproduces the finding and deleting any one clause loses it.
pub fn is_one_minimal(finding: &Finding, opts: &DiffOptions) -> bool {
    let key = finding.key();
    let f = finding.smallest();
    reproduces(f, &key, opts) && (0..f.num_clauses()).all(|i| !reproduces(&without(f, i), &key, opts))
}
