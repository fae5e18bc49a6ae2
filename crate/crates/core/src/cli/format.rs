//! Plain-text instance files.
//!
//! ```text
//! # optional comments
//! id small-knapsack
//! sense packing
//! n 2
//! m 1
//! A
//! 2 3
//! b
//! 4
//! ```
//!
//! The `id` line is optional; everything else must appear in this order.

use crate::knapsack::{Instance, Sense};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub id: Option<String>,
    pub instance: Instance,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    /// Whitespace-separated tokens with their 1-based columns.
    fn tokens(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.text.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((s + 1, &self.text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s + 1, &self.text[s..]));
        }
        out
    }
}

fn entry(line: &Line<'_>, column: usize, token: &str) -> Result<u64, Error> {
    if token.starts_with('-') && token[1..].parse::<u64>().is_ok() {
        return Err(line.error(column, format!("negative entry {token}")));
    }
    token
        .parse::<u64>()
        .map_err(|_| line.error(column, format!("expected a nonnegative integer, found {token:?}")))
}

fn count(line: &Line<'_>, keyword: &str) -> Result<usize, Error> {
    let toks = line.tokens();
    match toks.as_slice() {
        [(_, k), (c, v)] if *k == keyword => {
            let value = entry(line, *c, v)? as usize;
            if value == 0 {
                return Err(line.error(*c, format!("{keyword} must be positive")));
            }
            Ok(value)
        }
        _ => Err(line.error(1, format!("expected \"{keyword} <count>\""))),
    }
}

fn row(line: &Line<'_>, len: usize) -> Result<Vec<u64>, Error> {
    let toks = line.tokens();
    if toks.len() != len {
        let column = toks.get(len).map(|t| t.0).unwrap_or(line.text.len() + 1);
        return Err(line.error(column, format!("expected {len} entries, found {}", toks.len())));
    }
    toks.iter().map(|(c, t)| entry(line, *c, t)).collect()
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, t)| Line {
            number: i + 1,
            text: t.split('#').next().unwrap_or(""),
        })
        .filter(|l| !l.text.trim().is_empty());
    let last = text.lines().count().max(1);
    let mut next = |what: &str| {
        lines.next().ok_or(Error::Parse {
            line: last,
            column: 1,
            message: format!("unexpected end of file, expected {what}"),
        })
    };

    let mut line = next("sense")?;
    let mut id = None;
    if let [(_, "id"), rest @ ..] = line.tokens().as_slice() {
        if rest.len() != 1 {
            return Err(line.error(1, "expected \"id <name>\" with a single word"));
        }
        id = Some(rest[0].1.to_string());
        line = next("sense")?;
    }
    let sense = match line.tokens().as_slice() {
        [(_, "sense"), (_, "packing")] => Sense::Packing,
        [(_, "sense"), (_, "covering")] => Sense::Covering,
        [(_, "sense"), (c, other)] => {
            return Err(line.error(*c, format!("unknown sense {other:?} (expected packing or covering)")))
        }
        _ => return Err(line.error(1, "expected \"sense packing\" or \"sense covering\"")),
    };
    let n = count(&next("n")?, "n")?;
    let m = count(&next("m")?, "m")?;
    let header = next("A")?;
    if header.text.trim() != "A" {
        return Err(header.error(1, "expected \"A\""));
    }
    let mut a = Vec::with_capacity(m);
    for _ in 0..m {
        let line = next("a row of A")?;
        let r = row(&line, n)?;
        if sense == Sense::Covering && r.iter().all(|&v| v == 0) {
            return Err(line.error(1, "zero row infeasible for covering"));
        }
        a.push(r);
    }
    let header = next("b")?;
    if header.text.trim() != "b" {
        return Err(header.error(1, "expected \"b\""));
    }
    let line = next("the entries of b")?;
    let b = row(&line, m)?;
    if let Some(pos) = b.iter().position(|&v| v == 0) {
        return Err(line.error(line.tokens()[pos].0, "rhs must be positive"));
    }
    if let Some(extra) = lines.next() {
        return Err(extra.error(1, "unexpected content after b"));
    }
    let instance = Instance::new(sense, a, b).map_err(|e| match e {
        Error::InvalidInstance(msg) => Error::Parse {
            line: header.number,
            column: 1,
            message: msg,
        },
        other => other,
    })?;
    Ok(InstanceFile { id, instance })
}

pub fn serialize_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let mut out = String::new();
    if let Some(id) = &file.id {
        out.push_str(&format!("id {id}\n"));
    }
    out.push_str(&format!("sense {}\nn {}\nm {}\nA\n", inst.sense(), inst.n(), inst.m()));
    for r in inst.a() {
        out.push_str(&join(r));
        out.push('\n');
    }
    out.push_str("b\n");
    out.push_str(&join(inst.b()));
    out.push('\n');
    out
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
