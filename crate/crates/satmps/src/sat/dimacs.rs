use std::fmt::Write as _;

use super::{Clause, CnfInstance, Literal, SatError, SatResult};

/// Parse DIMACS CNF text.
///
/// Comment lines (`c ...`) are skipped and a SATLIB-style `%` line ends the
/// clause section. Clauses may span lines; each is closed by a `0`.
pub fn parse_dimacs(text: &str) -> SatResult<CnfInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<i64> = Vec::with_capacity(3);

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let malformed = || SatError::MalformedHeader { line: lineno, text: raw.to_string() };
            if header.is_some() {
                return Err(malformed());
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(malformed());
            }
            let n = fields[2].parse().map_err(|_| malformed())?;
            let m = fields[3].parse().map_err(|_| malformed())?;
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or(SatError::MissingHeader)?;
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| SatError::BadToken { line: lineno, token: tok.to_string() })?;
            if v == 0 {
                clauses.push(finish_clause(&pending, clauses.len(), n)?);
                pending.clear();
            } else {
                pending.push(v);
            }
        }
    }

    let (n, m) = header.ok_or(SatError::MissingHeader)?;
    if !pending.is_empty() {
        clauses.push(finish_clause(&pending, clauses.len(), n)?);
    }
    if clauses.len() != m {
        return Err(SatError::ClauseCount { expected: m, found: clauses.len() });
    }
    CnfInstance::new(n, clauses)
}

fn finish_clause(lits: &[i64], index: usize, n: usize) -> SatResult<Clause> {
    if lits.len() != 3 {
        return Err(SatError::ClauseArity { clause: index, found: lits.len() });
    }
    let mut out = [Literal::pos(1); 3];
    for (slot, &v) in out.iter_mut().zip(lits) {
        if v.unsigned_abs() as usize > n {
            return Err(SatError::VariableOutOfRange { variable: v, n });
        }
        *slot = Literal::from_dimacs(v).expect("nonzero literal");
    }
    Clause::new(out).map_err(|e| match e {
        SatError::DuplicateVariable { variable, .. } => {
            SatError::DuplicateVariable { clause: index, variable }
        }
        other => other,
    })
}

/// Canonical DIMACS: header line, then one `a b c 0` line per clause.
pub fn write_dimacs(instance: &CnfInstance) -> String {
    let mut out = String::with_capacity(16 + 16 * instance.m());
    writeln!(out, "p cnf {} {}", instance.n(), instance.m()).unwrap();
    for c in instance.clauses() {
        let [a, b, d] = c.literals().map(Literal::to_dimacs);
        writeln!(out, "{a} {b} {d} 0").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let inst = parse_dimacs("p cnf 3 1\n1 2 3 0").unwrap();
        assert_eq!((inst.n(), inst.m()), (3, 1));
        assert_eq!(inst.clauses()[0].literals().map(Literal::to_dimacs), [1, 2, 3]);

        let inst = parse_dimacs("p cnf 4 2\n1 -2 4 0\n-1 3 -4 0").unwrap();
        assert_eq!((inst.n(), inst.m()), (4, 2));
        assert_eq!(inst.alpha(), 0.5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_dimacs("p cnf 3 1\n1 -1 2 0"),
            Err(SatError::DuplicateVariable { clause: 0, variable: 1 })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 3 1\n1 2 0"),
            Err(SatError::ClauseArity { clause: 0, found: 2 })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 3 1\n1 2 5 0"),
            Err(SatError::VariableOutOfRange { variable: 5, n: 3 })
        ));
        assert!(matches!(parse_dimacs("p cnf x 1\n1 2 3 0"), Err(SatError::MalformedHeader { .. })));
        assert!(matches!(parse_dimacs("1 2 3 0"), Err(SatError::MissingHeader)));
        assert!(matches!(
            parse_dimacs("p cnf 3 2\n1 2 3 0"),
            Err(SatError::ClauseCount { expected: 2, found: 1 })
        ));
        assert!(matches!(parse_dimacs("p cnf 3 1\n1 two 3 0"), Err(SatError::BadToken { .. })));
    }

    #[test]
    fn tolerates_comments_split_lines_and_percent() {
        let text = "c hello\np cnf 5 2\n1 -2\n 3 0 -4 5 1 0\n%\n0\n";
        let inst = parse_dimacs(text).unwrap();
        assert_eq!(write_dimacs(&inst), "p cnf 5 2\n1 -2 3 0\n-4 5 1 0\n");
    }

    #[test]
    fn canonical_roundtrip_is_exact() {
        let canonical = "p cnf 6 3\n1 -2 4 0\n-6 3 5 0\n2 -3 -1 0\n";
        assert_eq!(write_dimacs(&parse_dimacs(canonical).unwrap()), canonical);
        assert_eq!(write_dimacs(&CnfInstance::empty(4)), "p cnf 4 0\n");
    }
}
