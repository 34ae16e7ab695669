//! Text form of pivoted formulas.
//!
//! ```text
//! c atoms 7
//! c origin 6 fresh-r
//! p pcnf 2
//! b 1 : 2 3 ; -4 5
//! b -1 : 4 -5
//! b 6 : 2 -3 ; -2
//! b -6 :
//! ```
//!
//! Each `b` line lists the pairs guarded by one pivot literal, separated by `;`. Blocks
//! appear as `+a`, `-a` per pivot in pivot order. The `c atoms` and `c origin` lines carry
//! the atom universe and provenance of non-original atoms so that parsing restores the
//! in-memory formula exactly; without them every atom up to the largest one seen is
//! treated as original.

use std::fmt::Write as _;

use formula_core::Literal;

use crate::{AtomOrigin, Pair, PivotBlock, PivotError, PivotedFormula};

pub fn write_pcnf(pf: &PivotedFormula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "c atoms {}", pf.num_atoms());
    for (i, origin) in pf.origins().iter().enumerate() {
        if *origin != AtomOrigin::Original {
            let _ = writeln!(out, "c origin {} {}", i + 1, origin.tag());
        }
    }
    let _ = writeln!(out, "p pcnf {}", pf.m());
    for block in pf.blocks() {
        let _ = write!(out, "b {} :", block.pivot.to_dimacs());
        for (j, pair) in block.pairs.iter().enumerate() {
            if j > 0 {
                out.push_str(" ;");
            }
            for l in pair.literals() {
                let _ = write!(out, " {}", l.to_dimacs());
            }
        }
        out.push('\n');
    }
    out
}

fn err(line: usize, reason: impl Into<String>) -> PivotError {
    PivotError::Parse {
        line,
        reason: reason.into(),
    }
}

fn literal(token: &str, line: usize) -> Result<Literal, PivotError> {
    let v: i64 = token.parse().map_err(|_| err(line, format!("bad literal `{token}`")))?;
    Literal::from_dimacs(v).map_err(|e| err(line, e.to_string()))
}

pub fn parse_pcnf(text: &str) -> Result<PivotedFormula, PivotError> {
    let mut declared_atoms: Option<u32> = None;
    let mut tagged: Vec<(u32, AtomOrigin)> = Vec::new();
    let mut m: Option<usize> = None;
    let mut blocks: Vec<PivotBlock> = Vec::new();
    let mut max_atom = 0u32;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "c" => match fields.get(1) {
                Some(&"atoms") => {
                    let n = fields
                        .get(2)
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err(line_no, "bad `c atoms` line"))?;
                    declared_atoms = Some(n);
                }
                Some(&"origin") => {
                    let atom: u32 = fields
                        .get(2)
                        .and_then(|s| s.parse().ok())
                        .filter(|&a| a > 0)
                        .ok_or_else(|| err(line_no, "bad atom in `c origin` line"))?;
                    let origin = fields
                        .get(3)
                        .and_then(|s| AtomOrigin::from_tag(s))
                        .ok_or_else(|| err(line_no, "unknown origin tag"))?;
                    tagged.push((atom, origin));
                }
                _ => {}
            },
            "p" => {
                if fields.len() != 3 || fields[1] != "pcnf" {
                    return Err(err(line_no, "malformed header, expected `p pcnf <pivots>`"));
                }
                if m.is_some() {
                    return Err(err(line_no, "duplicate header"));
                }
                m = Some(fields[2].parse().map_err(|_| err(line_no, "bad pivot count"))?);
            }
            "b" => {
                if m.is_none() {
                    return Err(err(line_no, "block before header"));
                }
                let rest = line[1..].trim();
                let (head, body) = rest.split_once(':').ok_or_else(|| err(line_no, "missing `:`"))?;
                let pivot = literal(head.trim(), line_no)?;
                max_atom = max_atom.max(pivot.atom());
                let mut pairs = Vec::new();
                if !body.trim().is_empty() {
                    for chunk in body.split(';') {
                        let lits: Vec<Literal> = chunk
                            .split_whitespace()
                            .map(|t| literal(t, line_no))
                            .collect::<Result<_, _>>()?;
                        for l in &lits {
                            max_atom = max_atom.max(l.atom());
                        }
                        pairs.push(match lits.as_slice() {
                            [q] => Pair::one(*q),
                            [p, q] if p.atom() != q.atom() => Pair::two(*p, *q),
                            _ => return Err(err(line_no, format!("bad pair `{}`", chunk.trim()))),
                        });
                    }
                }
                blocks.push(PivotBlock { pivot, pairs });
            }
            other => return Err(err(line_no, format!("unexpected line kind `{other}`"))),
        }
    }

    let m = m.ok_or_else(|| err(text.lines().count(), "missing `p pcnf` header"))?;
    if blocks.len() != 2 * m {
        return Err(err(text.lines().count(), format!("header declares {m} pivots, found {} blocks", blocks.len())));
    }
    let n = declared_atoms.unwrap_or(max_atom).max(max_atom);
    let mut origins = vec![AtomOrigin::Original; n as usize];
    for (atom, origin) in tagged {
        if atom > n {
            return Err(err(0, format!("origin tag for atom {atom} beyond {n}")));
        }
        origins[atom as usize - 1] = origin;
    }
    PivotedFormula::new(blocks, origins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{complete, to_pivoted};
    use formula_core::CnfFormula;

    #[test]
    fn round_trip_keeps_everything() {
        let f = CnfFormula::from_dimacs_lists(5, &[&[1, 2, 3], &[-1, 4, 5], &[2, -4, 5], &[-3], &[2, 3, -5]]);
        let pf = complete(&to_pivoted(&f));
        let text = write_pcnf(&pf);
        assert_eq!(parse_pcnf(&text).unwrap(), pf);
    }

    #[test]
    fn bare_format_without_comments() {
        let pf = parse_pcnf("p pcnf 1\nb 1 : 2 3\nb -1 : -2 3 ; 2 -3\n").unwrap();
        assert_eq!(pf.m(), 1);
        assert_eq!(pf.num_atoms(), 3);
        assert_eq!(pf.blocks()[1].pairs.len(), 2);
    }

    #[test]
    fn errors_name_lines() {
        assert!(matches!(parse_pcnf("p pcnf 1\nb 1 2 3\n"), Err(PivotError::Parse { line: 2, .. })));
        assert!(matches!(parse_pcnf("p pcnf 1\nb 1 : 2 3\nb -1 : 1 2\n"), Err(PivotError::PivotInEntry(1))));
        assert!(matches!(parse_pcnf("b 1 : 2 3\n"), Err(PivotError::Parse { line: 1, .. })));
    }
}
