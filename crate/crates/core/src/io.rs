//! Line-oriented text formats. Vertex ids are 1-based in files.
//!
//! ```text
//! c instance           c solution         c journal
//! p pac <n> <m>        s pac <cost>       j pac <d>
//! a <u> <v> <w>        a <u> <v>          R2 <v> <delta>
//!                                         R3 <v> <u> <wvu> <wuv>
//! c set cover                             R4 <h> <v0..v_{h+1}> <fwd..> <bwd..> <k> <a1> <a2> <b1> <b2>
//! p sc <nU> <nF> <ell>                    VC1 <u> <u'> <t> <tail head w>*t
//! s <e1> <e2> ...                         CYCLE
//! ```
//!
//! Files must be ASCII with LF line endings. Blank lines and `c` lines are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::graph::{Arc, Instance, Solution, Weight, MAX_WEIGHT};
use crate::kernel::{KernelJournal, PathRecord, Record};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl IoError {
    fn at(line: usize, reason: impl Into<String>) -> Self {
        IoError::Format { line, reason: reason.into() }
    }
}

/// Non-comment lines with their 1-based numbers, split into tokens.
fn lines(text: &str) -> Result<Vec<(usize, Vec<&str>)>, IoError> {
    let mut out = Vec::new();
    for (i, line) in text.split('\n').enumerate() {
        let no = i + 1;
        if !line.is_ascii() {
            return Err(IoError::at(no, "non-ASCII character"));
        }
        if line.contains('\r') {
            return Err(IoError::at(no, "carriage return (expected LF line endings)"));
        }
        let tokens: Vec<&str> = line.split_ascii_whitespace().collect();
        if tokens.is_empty() || tokens[0] == "c" {
            continue;
        }
        out.push((no, tokens));
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, IoError> {
    if !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(IoError::at(line, format!("{what} `{tok}` is not a non-negative integer")));
    }
    tok.parse().map_err(|_| IoError::at(line, format!("{what} `{tok}` is out of range")))
}

fn weight(line: usize, tok: &str) -> Result<Weight, IoError> {
    let w: Weight = number(line, tok, "weight")?;
    if w > MAX_WEIGHT {
        return Err(IoError::at(line, format!("weight {w} exceeds 2^63-1")));
    }
    Ok(w)
}

/// 1-based id in `1..=n`, returned 0-based.
fn vertex(line: usize, tok: &str, n: usize) -> Result<usize, IoError> {
    let v: usize = number(line, tok, "vertex")?;
    if v == 0 || v > n {
        return Err(IoError::at(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

fn expect_len(line: usize, tokens: &[&str], len: usize, shape: &str) -> Result<(), IoError> {
    if tokens.len() != len {
        return Err(IoError::at(line, format!("expected `{shape}`")));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut seen = HashSet::new();
    let mut last = 0;
    for (no, t) in lines(text)? {
        last = no;
        match t[0] {
            "p" => {
                if header.is_some() {
                    return Err(IoError::at(no, "second header"));
                }
                expect_len(no, &t, 4, "p pac <n> <m>")?;
                if t[1] != "pac" {
                    return Err(IoError::at(no, format!("unknown format `{}`", t[1])));
                }
                header = Some((number(no, t[2], "n")?, number(no, t[3], "m")?));
            }
            "a" => {
                let Some((n, _)) = header else {
                    return Err(IoError::at(no, "arc before header"));
                };
                expect_len(no, &t, 4, "a <u> <v> <w>")?;
                let (u, v) = (vertex(no, t[1], n)?, vertex(no, t[2], n)?);
                if u == v {
                    return Err(IoError::at(no, format!("self-loop at {}", u + 1)));
                }
                if !seen.insert((u, v)) {
                    return Err(IoError::at(no, format!("duplicate arc {} {}", u + 1, v + 1)));
                }
                arcs.push(Arc::new(u, v, weight(no, t[3])?));
            }
            other => return Err(IoError::at(no, format!("unexpected line type `{other}`"))),
        }
    }
    let Some((n, m)) = header else {
        return Err(IoError::at(last.max(1), "missing header `p pac <n> <m>`"));
    };
    if arcs.len() != m {
        return Err(IoError::at(last.max(1), format!("header declares {m} arcs, found {}", arcs.len())));
    }
    Instance::new(n, arcs).map_err(|e| IoError::at(last.max(1), e.to_string()))
}

pub fn write_instance(instance: &Instance) -> String {
    let mut s = String::with_capacity(16 * instance.m() + 32);
    let _ = writeln!(s, "p pac {} {}", instance.n(), instance.m());
    for a in instance.arcs() {
        let _ = writeln!(s, "a {} {} {}", a.tail + 1, a.head + 1, a.weight);
    }
    s
}

/// Parses a solution; vertex ids are only range-checked against `n` when given.
pub fn parse_solution(text: &str, n: Option<usize>) -> Result<Solution, IoError> {
    let bound = n.unwrap_or(usize::MAX);
    let mut cost = None;
    let mut arcs = Vec::new();
    let mut last = 0;
    for (no, t) in lines(text)? {
        last = no;
        match t[0] {
            "s" => {
                if cost.is_some() {
                    return Err(IoError::at(no, "second header"));
                }
                expect_len(no, &t, 3, "s pac <cost>")?;
                if t[1] != "pac" {
                    return Err(IoError::at(no, format!("unknown format `{}`", t[1])));
                }
                cost = Some(number::<Weight>(no, t[2], "cost")?);
            }
            "a" => {
                if cost.is_none() {
                    return Err(IoError::at(no, "arc before header"));
                }
                expect_len(no, &t, 3, "a <u> <v>")?;
                arcs.push((vertex(no, t[1], bound)?, vertex(no, t[2], bound)?));
            }
            other => return Err(IoError::at(no, format!("unexpected line type `{other}`"))),
        }
    }
    let cost = cost.ok_or_else(|| IoError::at(last.max(1), "missing header `s pac <cost>`"))?;
    Ok(Solution { arcs, cost })
}

pub fn write_solution(solution: &Solution) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "s pac {}", solution.cost);
    for &(t, h) in &solution.arcs {
        let _ = writeln!(s, "a {} {}", t + 1, h + 1);
    }
    s
}

fn opt_weight(line: usize, tok: &str) -> Result<Option<Weight>, IoError> {
    if tok == "inf" {
        Ok(None)
    } else {
        weight(line, tok).map(Some)
    }
}

fn id(line: usize, tok: &str) -> Result<usize, IoError> {
    vertex(line, tok, usize::MAX)
}

pub fn parse_journal(text: &str) -> Result<KernelJournal, IoError> {
    let mut offset = None;
    let mut records = Vec::new();
    let mut last = 0;
    for (no, t) in lines(text)? {
        last = no;
        if t[0] == "j" {
            if offset.is_some() {
                return Err(IoError::at(no, "second header"));
            }
            expect_len(no, &t, 3, "j pac <d>")?;
            if t[1] != "pac" {
                return Err(IoError::at(no, format!("unknown format `{}`", t[1])));
            }
            offset = Some(weight(no, t[2])?);
            continue;
        }
        if offset.is_none() {
            return Err(IoError::at(no, "record before header"));
        }
        let record = match t[0] {
            "R2" => {
                expect_len(no, &t, 3, "R2 <v> <delta>")?;
                Record::Normalize { v: id(no, t[1])?, delta: weight(no, t[2])? }
            }
            "R3" => {
                expect_len(no, &t, 5, "R3 <v> <u> <wvu> <wuv>")?;
                Record::Pendant { v: id(no, t[1])?, u: id(no, t[2])?, wvu: weight(no, t[3])?, wuv: weight(no, t[4])? }
            }
            "R4" => {
                if t.len() < 2 {
                    return Err(IoError::at(no, "expected `R4 <h> ...`"));
                }
                let h: usize = number(no, t[1], "h")?;
                if h < 2 || h > t.len() {
                    return Err(IoError::at(no, format!("bad inner vertex count {h}")));
                }
                expect_len(
                    no,
                    &t,
                    2 + (h + 2) + 2 * (h - 1) + 1 + 4,
                    "R4 <h> <path> <fwd> <bwd> <k> <a1> <a2> <b1> <b2>",
                )?;
                let mut rest = t[2..].iter();
                let path = rest.by_ref().take(h + 2).map(|s| id(no, s)).collect::<Result<Vec<_>, _>>()?;
                let forward = rest.by_ref().take(h - 1).map(|s| opt_weight(no, s)).collect::<Result<Vec<_>, _>>()?;
                let backward = rest.by_ref().take(h - 1).map(|s| opt_weight(no, s)).collect::<Result<Vec<_>, _>>()?;
                let k: usize = number(no, rest.next().expect("length checked"), "k")?;
                if k == 0 || k > h - 1 {
                    return Err(IoError::at(no, format!("k = {k} outside 1..={}", h - 1)));
                }
                let g: Vec<usize> = rest.map(|s| id(no, s)).collect::<Result<_, _>>()?;
                Record::Path(PathRecord { path, forward, backward, k: k - 1, gadget: [g[0], g[1], g[2], g[3]] })
            }
            "VC1" => {
                if t.len() < 4 {
                    return Err(IoError::at(no, "expected `VC1 <u> <u'> <t> ...`"));
                }
                let count: usize = number(no, t[3], "arc count")?;
                if t.len() != 4 + 3 * count.min(t.len()) {
                    return Err(IoError::at(no, format!("expected {count} arc triples")));
                }
                let arcs = t[4..]
                    .chunks(3)
                    .map(|c| Ok((id(no, c[0])?, id(no, c[1])?, weight(no, c[2])?)))
                    .collect::<Result<Vec<_>, IoError>>()?;
                Record::Twin { u: id(no, t[1])?, survivor: id(no, t[2])?, arcs }
            }
            "CYCLE" => {
                expect_len(no, &t, 1, "CYCLE")?;
                Record::Cycle
            }
            other => return Err(IoError::at(no, format!("unknown record `{other}`"))),
        };
        records.push(record);
    }
    let offset = offset.ok_or_else(|| IoError::at(last.max(1), "missing header `j pac <d>`"))?;
    let journal = KernelJournal { records, offset };
    if journal.record_sum() != Some(offset) {
        return Err(IoError::at(last.max(1), format!("records do not sum to d = {offset}")));
    }
    Ok(journal)
}

pub fn write_journal(journal: &KernelJournal) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "j pac {}", journal.offset);
    let w = |x: &Option<Weight>| x.map_or_else(|| "inf".to_string(), |w| w.to_string());
    for r in &journal.records {
        match r {
            Record::Normalize { v, delta } => {
                let _ = writeln!(s, "R2 {} {delta}", v + 1);
            }
            Record::Pendant { v, u, wvu, wuv } => {
                let _ = writeln!(s, "R3 {} {} {wvu} {wuv}", v + 1, u + 1);
            }
            Record::Path(p) => {
                let mut parts = vec!["R4".to_string(), p.inner().to_string()];
                parts.extend(p.path.iter().map(|v| (v + 1).to_string()));
                parts.extend(p.forward.iter().map(w));
                parts.extend(p.backward.iter().map(w));
                parts.push((p.k + 1).to_string());
                parts.extend(p.gadget.iter().map(|v| (v + 1).to_string()));
                let _ = writeln!(s, "{}", parts.join(" "));
            }
            Record::Twin { u, survivor, arcs } => {
                let _ = write!(s, "VC1 {} {} {}", u + 1, survivor + 1, arcs.len());
                for (t, h, wt) in arcs {
                    let _ = write!(s, " {} {} {wt}", t + 1, h + 1);
                }
                s.push('\n');
            }
            Record::Cycle => s.push_str("CYCLE\n"),
        }
    }
    s
}

/// Set Cover input with 0-based elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInput {
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
    pub ell: usize,
}

pub fn parse_setcover(text: &str) -> Result<SetCoverInput, IoError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut sets = Vec::new();
    let mut last = 0;
    for (no, t) in lines(text)? {
        last = no;
        match t[0] {
            "p" => {
                if header.is_some() {
                    return Err(IoError::at(no, "second header"));
                }
                expect_len(no, &t, 5, "p sc <nU> <nF> <ell>")?;
                if t[1] != "sc" {
                    return Err(IoError::at(no, format!("unknown format `{}`", t[1])));
                }
                header = Some((number(no, t[2], "nU")?, number(no, t[3], "nF")?, number(no, t[4], "ell")?));
            }
            "s" => {
                let Some((nu, _, _)) = header else {
                    return Err(IoError::at(no, "set before header"));
                };
                let set = t[1..].iter().map(|e| vertex(no, e, nu)).collect::<Result<Vec<_>, _>>()?;
                sets.push(set);
            }
            other => return Err(IoError::at(no, format!("unexpected line type `{other}`"))),
        }
    }
    let (universe, nf, ell) =
        header.ok_or_else(|| IoError::at(last.max(1), "missing header `p sc <nU> <nF> <ell>`"))?;
    if sets.len() != nf {
        return Err(IoError::at(last.max(1), format!("header declares {nf} sets, found {}", sets.len())));
    }
    Ok(SetCoverInput { universe, sets, ell })
}

pub fn write_setcover(input: &SetCoverInput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p sc {} {} {}", input.universe, input.sets.len(), input.ell);
    for set in &input.sets {
        s.push('s');
        for e in set {
            let _ = write!(s, " {}", e + 1);
        }
        s.push('\n');
    }
    s
}

/// One 1-based vertex id per line; returns 0-based ids.
pub fn parse_cover(text: &str, n: usize) -> Result<Vec<usize>, IoError> {
    lines(text)?
        .into_iter()
        .map(|(no, t)| {
            expect_len(no, &t, 1, "<vertex>")?;
            vertex(no, t[0], n)
        })
        .collect()
}

fn read(path: &Path) -> Result<String, IoError> {
    let bytes = std::fs::read(path)?;
    String::from_utf8(bytes).map_err(|e| {
        let line = e.as_bytes()[..e.utf8_error().valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        IoError::at(line, "non-ASCII character")
    })
}

pub fn read_instance(path: &Path) -> Result<Instance, IoError> {
    parse_instance(&read(path)?)
}

pub fn read_solution(path: &Path, n: Option<usize>) -> Result<Solution, IoError> {
    parse_solution(&read(path)?, n)
}

pub fn read_journal(path: &Path) -> Result<KernelJournal, IoError> {
    parse_journal(&read(path)?)
}

pub fn read_setcover(path: &Path) -> Result<SetCoverInput, IoError> {
    parse_setcover(&read(path)?)
}

pub fn read_cover(path: &Path, n: usize) -> Result<Vec<usize>, IoError> {
    parse_cover(&read(path)?, n)
}
