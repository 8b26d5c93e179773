//! Level files: the checkpoint unit of a run.
//!
//! ```text
//! trisparse-level 1
//! k 1
//! i -
//! j 3
//! order 4
//! count 1
//! C]
//! sha256 <64 hex digits over the body lines, each terminated by '\n'>
//! ```

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::graph6::{self, Graph6Error};
use crate::enumerator::{LevelSet, ProblemSpec, SpecError};

const MAGIC: &str = "trisparse-level 1";

#[derive(Debug, Error)]
pub enum LevelFileError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Header { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph6 { line: usize, source: Graph6Error },
    #[error("line {line}: graph has order {got}, header says {expected}")]
    OrderMismatch { line: usize, expected: usize, got: usize },
    #[error("header announces {expected} graphs, body has {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("digest mismatch: file says {stored}, body hashes to {computed}")]
    Digest { stored: String, computed: String },
    #[error("invalid parameters in header: {0}")]
    Spec(#[from] SpecError),
    #[error("file is for {found}, expected {expected}")]
    SpecConflict { expected: String, found: String },
}

/// Hex SHA-256 of the body lines.
pub fn body_digest<'a, I: IntoIterator<Item = &'a str>>(lines: I) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

pub fn write_level<W: Write>(level: &LevelSet, spec: &ProblemSpec, mut out: W) -> io::Result<()> {
    let body: Vec<String> = level.graphs().map(graph6::encode).collect();
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "k {}", spec.k())?;
    match spec.i() {
        Some(i) => writeln!(out, "i {i}")?,
        None => writeln!(out, "i -")?,
    }
    writeln!(out, "j {}", spec.j())?;
    writeln!(out, "order {}", level.order())?;
    writeln!(out, "count {}", body.len())?;
    for line in &body {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "sha256 {}", body_digest(body.iter().map(String::as_str)))?;
    out.flush()
}

fn header_field<'a>(lines: &'a [String], idx: usize, name: &str) -> Result<&'a str, LevelFileError> {
    let line = lines
        .get(idx)
        .ok_or_else(|| LevelFileError::Header { line: idx + 1, msg: format!("missing `{name}` line") })?;
    line.strip_prefix(name).and_then(|rest| rest.strip_prefix(' ')).ok_or_else(|| LevelFileError::Header {
        line: idx + 1,
        msg: format!("expected `{name} <value>`, found `{line}`"),
    })
}

fn parse_num(lines: &[String], idx: usize, name: &str) -> Result<usize, LevelFileError> {
    let raw = header_field(lines, idx, name)?;
    raw.parse().map_err(|_| LevelFileError::Header {
        line: idx + 1,
        msg: format!("`{name}` is not a non-negative integer: `{raw}`"),
    })
}

/// Parses and checks a level file. Members are canonicalized and sorted, so
/// files written by [`write_level`] round-trip unchanged.
pub fn read_level<R: BufRead>(input: R) -> Result<(LevelSet, ProblemSpec), LevelFileError> {
    let lines: Vec<String> = input.lines().collect::<Result<_, _>>()?;
    if lines.first().map(String::as_str) != Some(MAGIC) {
        return Err(LevelFileError::Header { line: 1, msg: format!("expected `{MAGIC}`") });
    }
    let k = parse_num(&lines, 1, "k")?;
    let i = match header_field(&lines, 2, "i")? {
        "-" => None,
        _ => Some(parse_num(&lines, 2, "i")?),
    };
    let j = parse_num(&lines, 3, "j")?;
    let order = parse_num(&lines, 4, "order")?;
    let count = parse_num(&lines, 5, "count")?;
    let spec = ProblemSpec::new(k, i, j)?;

    let body_end = lines
        .len()
        .checked_sub(1)
        .filter(|&e| e >= 6)
        .ok_or(LevelFileError::Header { line: lines.len() + 1, msg: "missing `sha256` footer".into() })?;
    let stored = header_field(&lines, body_end, "sha256")?.to_string();
    let body = &lines[6..body_end];
    if body.len() != count {
        return Err(LevelFileError::CountMismatch { expected: count, got: body.len() });
    }
    let computed = body_digest(body.iter().map(String::as_str));
    if computed != stored {
        return Err(LevelFileError::Digest { stored, computed });
    }
    let mut graphs = Vec::with_capacity(body.len());
    for (idx, line) in body.iter().enumerate() {
        let g = graph6::decode(line).map_err(|source| LevelFileError::Graph6 { line: idx + 7, source })?;
        if g.order() != order {
            return Err(LevelFileError::OrderMismatch { line: idx + 7, expected: order, got: g.order() });
        }
        graphs.push(g);
    }
    Ok((LevelSet::from_graphs(order, graphs), spec))
}

/// Reads a level file and insists it belongs to `expected`.
pub fn read_level_for<R: BufRead>(input: R, expected: &ProblemSpec) -> Result<LevelSet, LevelFileError> {
    let (level, found) = read_level(input)?;
    if &found != expected {
        return Err(LevelFileError::SpecConflict { expected: expected.to_string(), found: found.to_string() });
    }
    Ok(level)
}

/// `T_k1_j3` or `R_k1_i4_j4`.
pub fn spec_tag(spec: &ProblemSpec) -> String {
    match spec.i() {
        Some(i) => format!("R_k{}_i{}_j{}", spec.k(), i, spec.j()),
        None => format!("T_k{}_j{}", spec.k(), spec.j()),
    }
}

/// Where the checkpoint of `order` for `spec` lives inside `dir`.
pub fn level_path(dir: &Path, spec: &ProblemSpec, order: usize) -> PathBuf {
    dir.join(format!("{}_n{:02}.level", spec_tag(spec), order))
}

/// Writes via a temporary file and rename so a crash never leaves a torn file.
pub fn write_level_file(path: &Path, level: &LevelSet, spec: &ProblemSpec) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("level.tmp");
    {
        let f = fs::File::create(&tmp)?;
        write_level(level, spec, io::BufWriter::new(f))?;
    }
    fs::rename(&tmp, path)
}

pub fn read_level_file(path: &Path) -> Result<(LevelSet, ProblemSpec), LevelFileError> {
    read_level(io::BufReader::new(fs::File::open(path)?))
}
