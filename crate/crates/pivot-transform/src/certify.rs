use formula_core::{brute_force_sat_with_cap, CnfFormula, Literal, Status};
use serde::Serialize;

use crate::{expand, Pair, PivotBlock, PivotedFormula};

/// Oracle verdicts on both sides of a transform.
#[derive(Debug, Clone, Serialize)]
pub struct TransformCertificate {
    pub original: CnfFormula,
    pub pivoted: PivotedFormula,
    pub original_status: Status,
    pub pivoted_status: Status,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abort_reason: Option<String>,
}

/// Runs the exact oracle on `f` and on the clause expansion of `pf`.
///
/// When either side exceeds `cap` atoms the certificate carries an abort reason and `agree` is false.
pub fn certify_equisat(f: &CnfFormula, pf: &PivotedFormula, cap: u32) -> TransformCertificate {
    let original_status = brute_force_sat_with_cap(f, cap).status;
    let pivoted_status = brute_force_sat_with_cap(&expand(pf), cap).status;
    let aborted = original_status == Status::Abort || pivoted_status == Status::Abort;
    TransformCertificate {
        original: f.clone(),
        pivoted: pf.clone(),
        original_status,
        pivoted_status,
        agree: !aborted && original_status == pivoted_status,
        abort_reason: aborted.then(|| "oracle cap".to_string()),
    }
}

/// Negates one entry literal, chosen by `seed` among all pair literals.
///
/// Returns `None` when the formula has no pair literal to corrupt.
pub fn flip_entry_literal(pf: &PivotedFormula, seed: u64) -> Option<PivotedFormula> {
    let total: usize = pf
        .blocks()
        .iter()
        .map(|b| b.pairs.iter().map(|p| p.literals().len()).sum::<usize>())
        .sum();
    if total == 0 {
        return None;
    }
    let mut target = (seed % total as u64) as usize;
    let mut blocks: Vec<PivotBlock> = pf.blocks().to_vec();
    'outer: for block in &mut blocks {
        for pair in &mut block.pairs {
            let lits = pair.literals();
            if target < lits.len() {
                let mut new: Vec<Literal> = lits.to_vec();
                new[target] = new[target].negate();
                *pair = match new.as_slice() {
                    [q] => Pair::one(*q),
                    [p, q] => Pair::two(*p, *q),
                    _ => unreachable!(),
                };
                break 'outer;
            }
            target -= lits.len();
        }
    }
    Some(PivotedFormula::new(blocks, pf.origins().to_vec()).expect("negation keeps atoms"))
}
