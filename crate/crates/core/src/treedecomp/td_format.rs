//! The `.td` text format: `s td <bags> <width+1> <n>`, then `b <id> <v...>`
//! lines and `<a> <b>` tree edges. Ids are 1-based; `c` starts a comment.

use std::fmt::Write;

use crate::error::{Error, Result};

use super::TreeDecomposition;

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Returns the decomposition and the vertex count from the header.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut tree_edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if tokens.is_empty() || tokens[0] == "c" {
            continue;
        }
        let num = |j: usize| -> Result<usize> {
            let tok = tokens.get(j).ok_or_else(|| err(line_no, j + 1, "missing field"))?;
            tok.parse::<usize>()
                .map_err(|_| err(line_no, j + 1, format!("not a number: {tok}")))
        };
        match tokens[0] {
            "s" => {
                if tokens.get(1) != Some(&"td") || tokens.len() != 5 {
                    return Err(err(line_no, 1, "expected `s td <bags> <width+1> <n>`"));
                }
                if header.is_some() {
                    return Err(err(line_no, 1, "duplicate header"));
                }
                let nb = num(2)?;
                header = Some((nb, num(4)?));
                bags = vec![None; nb];
            }
            "b" => {
                let (nb, n) = header.ok_or_else(|| err(line_no, 1, "bag before header"))?;
                let id = num(1)?;
                if id == 0 || id > nb {
                    return Err(err(line_no, 2, format!("bag id {id} out of range")));
                }
                let mut bag = Vec::with_capacity(tokens.len() - 2);
                for j in 2..tokens.len() {
                    let v = num(j)?;
                    if v == 0 || v > n {
                        return Err(err(line_no, j + 1, format!("vertex {v} out of range")));
                    }
                    bag.push(v - 1);
                }
                bag.sort_unstable();
                if bags[id - 1].replace(bag).is_some() {
                    return Err(err(line_no, 2, format!("bag {id} given twice")));
                }
            }
            _ => {
                let (nb, _) = header.ok_or_else(|| err(line_no, 1, "edge before header"))?;
                if tokens.len() != 2 {
                    return Err(err(line_no, 1, "expected a tree edge `<a> <b>`"));
                }
                let (a, b) = (num(0)?, num(1)?);
                if a == 0 || b == 0 || a > nb || b > nb {
                    return Err(err(line_no, 1, "tree edge endpoint out of range"));
                }
                tree_edges.push((a - 1, b - 1));
            }
        }
    }
    let (_, n) = header.ok_or_else(|| err(1, 1, "missing header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| err(0, 0, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok((TreeDecomposition { bags, tree_edges }, n))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", td.bags.len(), td.width() + 1, n);
    for (i, bag) in td.bags.iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &(a, b) in &td.tree_edges {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}
