use std::fmt::Write as _;

use thiserror::Error;

use super::CnfFormula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {0}: missing or malformed `p cnf` header")]
    BadHeader(usize),
    #[error("line {line}: bad literal `{token}`")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {num_vars}")]
    VarOutOfRange { line: usize, lit: i64, num_vars: u32 },
    #[error("declared {declared} clauses but found {found}")]
    ClauseCount { declared: usize, found: usize },
}

/// Parses DIMACS CNF. Comment lines start with `c`; clauses may span lines
/// and a trailing clause without its terminating 0 is accepted.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(DimacsError::BadHeader(line_no));
            }
            let vars = parts[2].parse().map_err(|_| DimacsError::BadHeader(line_no))?;
            let count = parts[3].parse().map_err(|_| DimacsError::BadHeader(line_no))?;
            header = Some((vars, count));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(DimacsError::BadHeader(line_no));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| DimacsError::BadLiteral {
                line: line_no,
                token: tok.to_string(),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() > num_vars as u64 {
                return Err(DimacsError::VarOutOfRange {
                    line: line_no,
                    lit,
                    num_vars,
                });
            } else {
                current.push(lit as i32);
            }
        }
    }
    let Some((num_vars, declared)) = header else {
        return Err(DimacsError::BadHeader(text.lines().count().max(1)));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// Renders `f` as DIMACS. Each `(comment)` line is emitted as `c <text>`
/// before the header.
pub fn write_dimacs(f: &CnfFormula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p cnf {} {}", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}
