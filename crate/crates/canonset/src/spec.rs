//! Problem specification strings.
//!
//! ```text
//! true | ramsey:s=S,t=T | clawfree | connected | degseq:D1,D2,… | hi:D1,D2,…
//!      | extra-cnf:<path>
//! ```
//!
//! Several specs joined with `+` are conjoined, e.g.
//! `ramsey:s=3,t=4+extra-cnf:side.cnf`.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use canonset_core::matrix::EfpaInstance;
use canonset_core::problems::{CnfFragment, DegreeSequence, Predicate};

use crate::dimacs;
use crate::error::{Error, Result};

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("expected a number, got {t:?}"))))
        .collect()
}

fn parse_degrees(s: &str) -> Result<DegreeSequence> {
    Ok(DegreeSequence::new(parse_list(s)?)?)
}

fn parse_keyed(body: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let mut out = vec![None; keys.len()];
    for part in body.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("expected key=value, got {part:?}")))?;
        let slot = keys
            .iter()
            .position(|&key| key == k.trim())
            .ok_or_else(|| usage(format!("unknown key {k:?}")))?;
        out[slot] = Some(v.trim().parse().map_err(|_| usage(format!("bad value for {k}: {v:?}")))?);
    }
    keys.iter()
        .zip(out)
        .map(|(k, v)| v.ok_or_else(|| usage(format!("missing {k}"))))
        .collect()
}

/// Loads a DIMACS fragment over the edge variables.
pub fn load_fragment(path: &Path) -> Result<CnfFragment> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let d = dimacs::parse(BufReader::new(file), &path.display().to_string())?;
    Ok(CnfFragment {
        label: path.display().to_string(),
        num_vars: d.num_vars,
        clauses: d.clauses,
    })
}

fn parse_one(s: &str) -> Result<Predicate> {
    let (head, body) = match s.split_once(':') {
        Some((h, b)) => (h, Some(b)),
        None => (s, None),
    };
    match (head.trim(), body) {
        ("true" | "none", None) => Ok(Predicate::True),
        ("clawfree", None) => Ok(Predicate::ClawFree),
        ("connected", None) => Ok(Predicate::Connected),
        ("ramsey", Some(b)) => {
            let v = parse_keyed(b, &["s", "t"])?;
            Ok(Predicate::ramsey(v[0], v[1])?)
        }
        ("degseq", Some(b)) => Ok(Predicate::DegreeSequence(parse_degrees(b)?)),
        ("hi", Some(b)) => Ok(Predicate::HighlyIrregular(parse_degrees(b)?)),
        ("extra-cnf", Some(p)) => Ok(Predicate::Cnf(Box::new(load_fragment(Path::new(p))?))),
        _ => Err(usage(format!("unknown problem {s:?}"))),
    }
}

pub fn parse_problem(s: &str) -> Result<Predicate> {
    let mut p = Predicate::True;
    for part in s.split('+') {
        p = p.and(parse_one(part)?);
    }
    Ok(p)
}

/// `q,λ,d,v`, optionally as `efpa:q=…,lambda=…,d=…,v=…`.
pub fn parse_efpa(s: &str) -> Result<EfpaInstance> {
    let v = match s.strip_prefix("efpa:") {
        Some(body) => parse_keyed(body, &["q", "lambda", "d", "v"])?,
        None => parse_list(s)?,
    };
    if v.len() != 4 {
        return Err(usage("EFPA parameters are q,lambda,d,v"));
    }
    Ok(EfpaInstance::new(v[0], v[1], v[2], v[3])?)
}
