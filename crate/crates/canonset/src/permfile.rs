//! Text format for permutation sets.
//!
//! ```text
//! canonset v1 kind=graph n=4 problem=none complete=true
//! 2 1 3 4
//! 1 3 2 4
//! ```
//!
//! Matrix sets use `kind=matrix n=<rows> cols=<cols>` and lines of the form
//! `<row-perm> | <col-perm>`. Permutations are 1-based images; lines
//! starting with `#` are comments.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use canonset_core::canonize::{PermSet, Provenance};
use canonset_core::matrix::{PairSet, PermPair};
use canonset_core::Permutation;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetFile {
    Graph(PermSet),
    Matrix(PairSet),
}

fn images(p: &Permutation) -> String {
    p.images().iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_perm_set<W: Write>(w: &mut W, set: &PermSet) -> io::Result<()> {
    let problem = match set.provenance() {
        Provenance::InstanceIndependent => "none",
        Provenance::InstanceDependent(s) => s.as_str(),
    };
    writeln!(
        w,
        "canonset v1 kind=graph n={} problem={problem} complete={}",
        set.n(),
        set.is_complete()
    )?;
    for p in set.entries() {
        writeln!(w, "{}", images(p))?;
    }
    Ok(())
}

pub fn write_pair_set<W: Write>(w: &mut W, set: &PairSet) -> io::Result<()> {
    writeln!(
        w,
        "canonset v1 kind=matrix n={} cols={} problem={} complete={}",
        set.rows(),
        set.cols(),
        set.problem.as_deref().unwrap_or("none"),
        set.is_complete()
    )?;
    for p in set.entries() {
        writeln!(w, "{} | {}", images(&p.rows), images(&p.cols))?;
    }
    Ok(())
}

fn parse_perm(s: &str, n: usize, what: &str, line: usize) -> Result<Permutation> {
    let imgs: Vec<usize> = s
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(what, line, format!("bad image {t:?}"))))
        .collect::<Result<_>>()?;
    if imgs.len() != n {
        return Err(Error::parse(what, line, format!("expected {n} images, found {}", imgs.len())));
    }
    Permutation::from_images(&imgs).map_err(|e| Error::parse(what, line, e.to_string()))
}

pub fn read_set<R: BufRead>(r: R, what: &str) -> Result<SetFile> {
    let mut lines = r
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty() && !l.trim_start().starts_with('#')));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(what, 0, "empty file"))?;
    let header = header?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("canonset") || tokens.next() != Some("v1") {
        return Err(Error::parse(what, hl, "expected header `canonset v1 …`"));
    }
    let (mut kind, mut n, mut cols, mut problem, mut complete) = (None, None, None, None, None);
    for t in tokens {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| Error::parse(what, hl, format!("bad header field {t:?}")))?;
        let num = || v.parse::<usize>().map_err(|_| Error::parse(what, hl, format!("bad {k}")));
        match k {
            "kind" => kind = Some(v.to_owned()),
            "n" => n = Some(num()?),
            "cols" => cols = Some(num()?),
            "problem" => problem = Some(v.to_owned()),
            "complete" => {
                complete = Some(v.parse::<bool>().map_err(|_| Error::parse(what, hl, "bad complete flag"))?)
            }
            _ => return Err(Error::parse(what, hl, format!("unknown header field {k:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(what, hl, "missing n"))?;
    let problem = problem.filter(|p| p != "none");
    let complete = complete.unwrap_or(true);
    match kind.as_deref() {
        Some("graph") => {
            let prov = match problem {
                Some(p) => Provenance::InstanceDependent(p),
                None => Provenance::InstanceIndependent,
            };
            let mut set = PermSet::new(n, prov);
            for (k, line) in lines {
                set.push(parse_perm(&line?, n, what, k)?)?;
            }
            set.set_complete(complete);
            Ok(SetFile::Graph(set))
        }
        Some("matrix") => {
            let c = cols.ok_or_else(|| Error::parse(what, hl, "matrix sets need cols"))?;
            let mut set = PairSet::new(n, c);
            set.problem = problem;
            for (k, line) in lines {
                let line = line?;
                let (r, cp) = line
                    .split_once('|')
                    .ok_or_else(|| Error::parse(what, k, "expected `<rows> | <cols>`"))?;
                set.push(PermPair::new(parse_perm(r, n, what, k)?, parse_perm(cp, c, what, k)?))?;
            }
            set.set_complete(complete);
            Ok(SetFile::Matrix(set))
        }
        _ => Err(Error::parse(what, hl, "kind must be graph or matrix")),
    }
}

pub fn load(path: &Path) -> Result<SetFile> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_set(BufReader::new(file), &path.display().to_string())
}

pub fn load_graph_set(path: &Path) -> Result<PermSet> {
    match load(path)? {
        SetFile::Graph(s) => Ok(s),
        SetFile::Matrix(_) => Err(Error::Usage(format!("{}: expected a graph permutation set", path.display()))),
    }
}

pub fn load_pair_set(path: &Path) -> Result<PairSet> {
    match load(path)? {
        SetFile::Matrix(s) => Ok(s),
        SetFile::Graph(_) => Err(Error::Usage(format!("{}: expected a matrix pair set", path.display()))),
    }
}

pub fn save(path: &Path, set: &SetFile) -> Result<()> {
    let mut file = io::BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
    match set {
        SetFile::Graph(s) => write_perm_set(&mut file, s),
        SetFile::Matrix(s) => write_pair_set(&mut file, s),
    }
    .and_then(|_| file.flush())
    .map_err(|e| Error::io(path, e))
}
