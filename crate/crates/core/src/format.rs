//! Plain-text instance files. Vertex ids are 1-based in files.
//!
//! ```text
//! # comment
//! p ssp <n> <m> <k> <l>
//! s <v>
//! t <v>
//! e <u> <v>                      one line per edge
//! w <v> <kappa> <lambda> <eta>   optional; any such line makes the
//!                                instance weighted, unlisted vertices get 1 1 0
//! ```
//!
//! Weights above the budget they are checked against are clamped to one
//! more than that budget on ingest; this does not change any answer.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{SspInstance, VwSspInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceFile {
    Ssp(SspInstance),
    Weighted(VwSspInstance),
}

impl InstanceFile {
    pub fn to_weighted(&self) -> VwSspInstance {
        match self {
            InstanceFile::Ssp(i) => crate::instance::lift(i),
            InstanceFile::Weighted(i) => i.clone(),
        }
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
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

    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn numbers<const N: usize>(&self, tokens: &[(usize, &str)]) -> Result<[u64; N]> {
        if tokens.len() != N + 1 {
            let col = tokens.get(N + 1).map_or(self.text.len() + 1, |t| t.0);
            return Err(self.error(col, format!("expected {N} values after '{}'", tokens[0].1)));
        }
        let mut out = [0u64; N];
        for (slot, &(col, tok)) in out.iter_mut().zip(&tokens[1..]) {
            *slot = tok
                .parse()
                .map_err(|_| self.error(col, format!("'{tok}' is not a nonnegative integer")))?;
        }
        Ok(out)
    }
}

fn to_index(line: &Line, col: usize, v: u64, n: usize) -> Result<usize> {
    if v >= 1 && v <= n as u64 {
        Ok(v as usize - 1)
    } else {
        Err(line.error(col, format!("vertex {v} out of range 1..={n}")))
    }
}

struct Header {
    line: usize,
    n: usize,
    m: u64,
    k: u64,
    l: u64,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut header: Option<Header> = None;
    let mut s: Option<usize> = None;
    let mut t: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut weights: Vec<(usize, [u64; 3])> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = Line {
            number: idx + 1,
            text: raw.split('#').next().unwrap_or(""),
        };
        last_line = idx + 1;
        let tokens = line.tokens();
        let Some(&(col, keyword)) = tokens.first() else {
            continue;
        };
        let Some(h) = &header else {
            if keyword != "p" {
                return Err(line.error(col, "expected 'p ssp' header"));
            }
            if tokens.get(1).map(|t| t.1) != Some("ssp") {
                let col = tokens.get(1).map_or(line.text.len() + 1, |t| t.0);
                return Err(line.error(col, "expected problem name 'ssp'"));
            }
            let [n, m, k, l] = line.numbers::<4>(&tokens[1..])?;
            header = Some(Header {
                line: line.number,
                n: n as usize,
                m,
                k,
                l,
            });
            continue;
        };
        match keyword {
            "p" => return Err(line.error(col, "duplicate header")),
            "s" | "t" => {
                let [v] = line.numbers::<1>(&tokens)?;
                let v = to_index(&line, tokens[1].0, v, h.n)?;
                let slot = if keyword == "s" { &mut s } else { &mut t };
                if slot.replace(v).is_some() {
                    return Err(line.error(col, format!("duplicate '{keyword}' line")));
                }
            }
            "e" => {
                let [u, v] = line.numbers::<2>(&tokens)?;
                let (u, v) = (to_index(&line, tokens[1].0, u, h.n)?, to_index(&line, tokens[2].0, v, h.n)?);
                if u == v {
                    return Err(line.error(tokens[2].0, format!("self-loop on {}", u + 1)));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(line.error(col, format!("duplicate edge {} {}", u + 1, v + 1)));
                }
                edges.push((u, v));
            }
            "w" => {
                let [v, kappa, lambda, eta] = line.numbers::<4>(&tokens)?;
                let v = to_index(&line, tokens[1].0, v, h.n)?;
                if kappa == 0 {
                    return Err(line.error(tokens[2].0, "kappa must be positive"));
                }
                weights.push((v, [kappa, lambda, eta]));
            }
            other => return Err(line.error(col, format!("unknown record '{other}'"))),
        }
    }
    let at_end = |message: &str| Error::Parse {
        line: last_line.max(1),
        column: 1,
        message: message.into(),
    };
    let Some(Header { line, n, m, k, l }) = header else {
        return Err(at_end("missing header"));
    };
    let (Some(s), Some(t)) = (s, t) else {
        return Err(at_end("missing 's' or 't' line"));
    };
    if edges.len() as u64 != m {
        return Err(Error::Parse {
            line,
            column: 1,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    let graph = Graph::from_edges(n, edges)?;
    if weights.is_empty() {
        return Ok(InstanceFile::Ssp(SspInstance::new(graph, s, t, k, l)?));
    }
    let mut kappa = vec![1; n];
    let mut lambda = vec![1; n];
    let mut eta = vec![0; n];
    for (v, [c, la, e]) in weights {
        kappa[v] = c.min(k.saturating_add(1));
        lambda[v] = la.min(l.saturating_add(1));
        eta[v] = e.min(l.saturating_add(1));
    }
    Ok(InstanceFile::Weighted(VwSspInstance::new(graph, s, t, k, l, kappa, lambda, eta)?))
}

fn write_common(out: &mut String, g: &Graph, s: usize, t: usize, k: u64, l: u64) {
    let _ = writeln!(out, "p ssp {} {} {k} {l}", g.n(), g.m());
    let _ = writeln!(out, "s {}", s + 1);
    let _ = writeln!(out, "t {}", t + 1);
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
}

pub fn write_ssp(i: &SspInstance) -> String {
    let mut out = String::new();
    write_common(&mut out, &i.graph, i.s, i.t, i.k, i.l);
    out
}

/// Writes every vertex with non-default weights, and `s` when all weights
/// are default so the file still reads back as weighted.
pub fn write_weighted(i: &VwSspInstance) -> String {
    let mut out = String::new();
    write_common(&mut out, &i.graph, i.s, i.t, i.k, i.l);
    let mut any = false;
    for v in 0..i.n() {
        if (i.kappa[v], i.lambda[v], i.eta[v]) != (1, 1, 0) {
            let _ = writeln!(out, "w {} {} {} {}", v + 1, i.kappa[v], i.lambda[v], i.eta[v]);
            any = true;
        }
    }
    if !any {
        let _ = writeln!(out, "w {} 1 1 0", i.s + 1);
    }
    out
}

pub fn write_instance(f: &InstanceFile) -> String {
    match f {
        InstanceFile::Ssp(i) => write_ssp(i),
        InstanceFile::Weighted(i) => write_weighted(i),
    }
}
