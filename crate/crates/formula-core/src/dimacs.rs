use std::fmt::Write as _;

use crate::{Clause, CnfFormula, FormulaError, Literal};

fn parse_err(line: usize, reason: impl Into<String>) -> FormulaError {
    FormulaError::Parse {
        line,
        reason: reason.into(),
    }
}

/// Parses DIMACS CNF text. Clauses may span lines; comment lines start with `c`.
///
/// Clause order is preserved. Tautological clauses are dropped with a log note.
pub fn parse_dimacs(input: &[u8]) -> Result<CnfFormula, FormulaError> {
    let text = std::str::from_utf8(input).map_err(|e| parse_err(0, format!("input is not UTF-8: {e}")))?;
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(line_no, "duplicate header"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(parse_err(line_no, "malformed header, expected `p cnf <atoms> <clauses>`"));
            }
            let atoms: u32 = fields[2]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad atom count `{}`", fields[2])))?;
            let count: usize = fields[3]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad clause count `{}`", fields[3])))?;
            header = Some((atoms, count));
            continue;
        }
        let Some((num_atoms, _)) = header else {
            return Err(parse_err(line_no, "clause before header"));
        };
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad literal `{token}`")))?;
            if value == 0 {
                match Clause::new(&pending) {
                    Ok(Some(c)) => {
                        if c.max_atom() > num_atoms {
                            return Err(parse_err(
                                line_no,
                                format!("atom {} out of range 1..={num_atoms}", c.max_atom()),
                            ));
                        }
                        clauses.push(c)
                    }
                    Ok(None) => log::info!("line {line_no}: tautological clause dropped"),
                    Err(FormulaError::EmptyClause) => return Err(parse_err(line_no, "empty clause")),
                    Err(FormulaError::ClauseTooLong(n)) => {
                        return Err(parse_err(line_no, format!("clause length {n} exceeds 3")))
                    }
                    Err(e) => return Err(parse_err(line_no, e.to_string())),
                }
                pending.clear();
                continue;
            }
            let lit = Literal::from_dimacs(value).map_err(|e| parse_err(line_no, e.to_string()))?;
            pending.push(lit);
        }
    }

    let Some((num_atoms, declared)) = header else {
        return Err(parse_err(last_line, "missing `p cnf` header"));
    };
    if !pending.is_empty() {
        return Err(parse_err(last_line, "last clause is not terminated by 0"));
    }
    if declared != clauses.len() {
        log::warn!("header declares {declared} clauses, found {}", clauses.len());
    }
    CnfFormula::new(num_atoms, clauses)
}

/// Writes the formula in DIMACS CNF form.
pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", f.num_atoms(), f.num_clauses());
    for c in f.clauses() {
        for l in c.literals() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_clause() {
        let f = parse_dimacs(b"p cnf 2 1\n1 2 0").unwrap();
        assert_eq!(f.num_atoms(), 2);
        assert_eq!(f.clauses(), &[Clause::from_dimacs(&[1, 2])]);
    }

    #[test]
    fn vacuous_formula() {
        let f = parse_dimacs(b"p cnf 1 0").unwrap();
        assert_eq!(f.num_atoms(), 1);
        assert!(f.clauses().is_empty());
    }

    #[test]
    fn clause_of_length_four_names_its_line() {
        let err = parse_dimacs(b"p cnf 3 1\n1 2 3 4 0").unwrap_err();
        match err {
            FormulaError::Parse { line, reason } => {
                assert_eq!(line, 2);
                assert!(reason.contains("length 4"), "{reason}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn malformed_header() {
        assert!(matches!(
            parse_dimacs(b"p dnf 2 1\n1 0"),
            Err(FormulaError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs(b"1 2 0\n"),
            Err(FormulaError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn out_of_range_atom() {
        assert!(matches!(
            parse_dimacs(b"c hi\np cnf 2 1\n1 3 0\n"),
            Err(FormulaError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn clauses_may_span_lines_and_order_is_kept() {
        let f = parse_dimacs(b"p cnf 3 2\n1 -2\n 0 3 0\n").unwrap();
        assert_eq!(
            f.clauses(),
            &[Clause::from_dimacs(&[1, -2]), Clause::from_dimacs(&[3])]
        );
    }

    #[test]
    fn empty_clause_is_rejected() {
        assert!(parse_dimacs(b"p cnf 2 1\n0\n").is_err());
    }

    #[test]
    fn write_then_parse() {
        let f = CnfFormula::from_dimacs_lists(4, &[&[1, -2, 3], &[-4], &[2, 4]]);
        assert_eq!(parse_dimacs(write_dimacs(&f).as_bytes()).unwrap(), f);
    }
}
