//! DIMACS CNF reading and writing.

use std::io::{self, BufRead, Write};

use canonset_core::cnf::{CnfFormula, Lit, Var};

use crate::error::{Error, Result};

/// A parsed DIMACS file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl Dimacs {
    pub fn to_formula(&self) -> CnfFormula {
        let mut f = CnfFormula::new();
        if let Some(v) = Var::from_dimacs(self.num_vars) {
            f.ensure_var(v);
        }
        let mut buf = Vec::new();
        for c in &self.clauses {
            buf.clear();
            buf.extend(c.iter().map(|&l| Lit::from_dimacs(l).expect("nonzero literal")));
            f.add_clause(&buf);
        }
        f
    }
}

/// Writes `f` with leading `c` comment lines.
pub fn write<W: Write>(w: &mut W, f: &CnfFormula, comments: &[String]) -> io::Result<()> {
    write_with_units(w, f, &[], comments)
}

/// Writes `f ∧ units`. A formula already known to be unsatisfiable is
/// written as a contradiction over a fresh variable.
pub fn write_with_units<W: Write>(w: &mut W, f: &CnfFormula, units: &[Lit], comments: &[String]) -> io::Result<()> {
    let mut out = io::BufWriter::new(w);
    for c in comments {
        for line in c.lines() {
            writeln!(out, "c {line}")?;
        }
    }
    let contradiction = f.is_marked_unsat();
    let vars = f.num_vars() + u32::from(contradiction);
    let clauses = f.num_clauses() + units.len() + if contradiction { 2 } else { 0 };
    writeln!(out, "p cnf {vars} {clauses}")?;
    let mut line = String::new();
    for c in f.clauses() {
        line.clear();
        for l in c {
            line.push_str(&l.to_dimacs().to_string());
            line.push(' ');
        }
        line.push('0');
        writeln!(out, "{line}")?;
    }
    for u in units {
        writeln!(out, "{} 0", u.to_dimacs())?;
    }
    if contradiction {
        writeln!(out, "{vars} 0\n-{vars} 0")?;
    }
    out.flush()
}

/// Parses DIMACS CNF. Comments, clauses spanning lines and a trailing `%`
/// marker are accepted; the header must precede the first clause.
pub fn parse<R: BufRead>(r: R, what: &str) -> Result<Dimacs> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        if let Some(rest) = t.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if header.is_some() || parts.len() != 3 || parts[0] != "cnf" {
                return Err(Error::parse(what, k + 1, "malformed problem line"));
            }
            let nv = parts[1].parse().map_err(|_| Error::parse(what, k + 1, "bad variable count"))?;
            let nc = parts[2].parse().map_err(|_| Error::parse(what, k + 1, "bad clause count"))?;
            header = Some((nv, nc));
            continue;
        }
        let Some((nv, _)) = header else {
            return Err(Error::parse(what, k + 1, "clause before problem line"));
        };
        for tok in t.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| Error::parse(what, k + 1, format!("bad literal {tok:?}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() > nv {
                return Err(Error::parse(what, k + 1, format!("literal {l} exceeds {nv} variables")));
            } else {
                current.push(l);
            }
        }
    }
    let Some((num_vars, _)) = header else {
        return Err(Error::parse(what, 0, "missing problem line"));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    Ok(Dimacs { num_vars, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut f = CnfFormula::new();
        let v = f.new_vars(3);
        f.add_clause(&[v[0].pos(), v[2].neg()]);
        f.add_clause(&[v[1].neg()]);
        let mut out = Vec::new();
        write(&mut out, &f, &["edge 1 = (1,2)".into()]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "c edge 1 = (1,2)\np cnf 3 2\n1 -3 0\n-2 0\n");
        let d = parse(text.as_bytes(), "t").unwrap();
        assert_eq!(d, Dimacs { num_vars: 3, clauses: vec![vec![1, -3], vec![-2]] });
        assert_eq!(d.to_formula().num_clauses(), 2);
    }

    #[test]
    fn tolerant_parsing() {
        let d = parse("c x\np cnf 2 2\n1\n -2 0 2 0\n%\n0\n".as_bytes(), "t").unwrap();
        assert_eq!(d.clauses, vec![vec![1, -2], vec![2]]);
        assert!(parse("1 0\n".as_bytes(), "t").is_err());
        assert!(parse("p cnf 1 1\n2 0\n".as_bytes(), "t").is_err());
        assert!(parse("p cnf 1 1\nx 0\n".as_bytes(), "t").is_err());
        assert!(parse("".as_bytes(), "t").is_err());
    }

    #[test]
    fn unsat_marker_becomes_contradiction() {
        let mut f = CnfFormula::new();
        f.new_var();
        f.mark_unsat();
        let mut out = Vec::new();
        write_with_units(&mut out, &f, &[Lit::from_dimacs(-1).unwrap()], &[]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "p cnf 2 3\n-1 0\n2 0\n-2 0\n");
    }
}
