//! Plain-text instance and solution formats.
//!
//! Hypergraphs:
//!
//! ```text
//! hgr <n> <m> <r>
//! <v> <v> ...        (m lines, one hyperedge each, at most r ids)
//! ```
//!
//! Graphs:
//!
//! ```text
//! gr <n> <m>
//! <u> <v>            (m lines)
//! ```
//!
//! Blank lines are not allowed between records, and anything after the last
//! record other than trailing whitespace is rejected. Solution files are one
//! record per line: `edge-id color` for edge colorings, `edge-id: c1 c2 ...`
//! for color lists, `u v` for an oriented edge, `edge-id class` for
//! pseudo-forest classes, `node color` for vertex colorings, and a bare id
//! per line for matchings and independent sets.

use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::{Graph, Hypergraph, InstanceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: expected {expected} records, input ended after {got}")]
    Truncated {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: trailing data after the last record")]
    TrailingGarbage { line: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    fn next_record(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next().map(|(i, l)| (i + 1, l.trim()))
    }

    fn finish(mut self) -> Result<(), FormatError> {
        for (i, l) in self.inner.by_ref() {
            if !l.trim().is_empty() {
                return Err(FormatError::TrailingGarbage { line: i + 1 });
            }
        }
        Ok(())
    }
}

fn parse_ids(line: usize, text: &str) -> Result<Vec<usize>, FormatError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| syntax(line, format!("invalid id {t:?}")))
        })
        .collect()
}

fn header<'a>(
    lines: &mut Lines<'a>,
    tag: &str,
    fields: usize,
) -> Result<Vec<usize>, FormatError> {
    let (ln, text) = lines
        .next_record()
        .ok_or_else(|| syntax(1, "missing header"))?;
    let mut parts = text.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(syntax(ln, format!("expected header starting with {tag:?}")));
    }
    let rest: Vec<&str> = parts.collect();
    if rest.len() != fields {
        return Err(syntax(
            ln,
            format!("header {tag:?} takes {fields} numbers, found {}", rest.len()),
        ));
    }
    parse_ids(ln, &rest.join(" "))
}

fn records<'a>(
    lines: &mut Lines<'a>,
    m: usize,
) -> Result<Vec<(usize, &'a str)>, FormatError> {
    let mut out = Vec::with_capacity(m);
    for got in 0..m {
        match lines.next_record() {
            Some((ln, text)) if !text.is_empty() => out.push((ln, text)),
            Some((ln, _)) => return Err(syntax(ln, "blank line inside records")),
            None => {
                return Err(FormatError::Truncated {
                    line: got + 2,
                    expected: m,
                    got,
                })
            }
        }
    }
    Ok(out)
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, FormatError> {
    let mut lines = Lines::new(text);
    let h = header(&mut lines, "hgr", 3)?;
    let (n, m, r) = (h[0], h[1], h[2]);
    let mut edges = Vec::with_capacity(m);
    for (ln, rec) in records(&mut lines, m)? {
        let e = parse_ids(ln, rec)?;
        if e.len() > r {
            return Err(syntax(
                ln,
                format!("hyperedge has {} vertices, header rank is {r}", e.len()),
            ));
        }
        edges.push(e);
    }
    lines.finish()?;
    Ok(Hypergraph::new(n, edges)?)
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = Lines::new(text);
    let h = header(&mut lines, "gr", 2)?;
    let (n, m) = (h[0], h[1]);
    let mut edges = Vec::with_capacity(m);
    for (ln, rec) in records(&mut lines, m)? {
        match parse_ids(ln, rec)?.as_slice() {
            [u, v] => edges.push((*u, *v)),
            other => {
                return Err(syntax(
                    ln,
                    format!("graph edge needs 2 ids, found {}", other.len()),
                ))
            }
        }
    }
    lines.finish()?;
    Ok(Graph::new(n, &edges)?)
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut s = format!("hgr {} {} {}\n", h.n(), h.m(), h.rank());
    for e in h.edges() {
        let ids: Vec<String> = e.iter().map(ToString::to_string).collect();
        s.push_str(&ids.join(" "));
        s.push('\n');
    }
    s
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("gr {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// Either kind of instance, as recognized by its header.
#[derive(Debug, Clone)]
pub enum Instance {
    Graph(Graph),
    Hypergraph(Hypergraph),
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let first = text.split_whitespace().next().unwrap_or("");
    match first {
        "gr" => parse_graph(text).map(Instance::Graph),
        "hgr" => parse_hypergraph(text).map(Instance::Hypergraph),
        _ => Err(syntax(1, "expected a `gr` or `hgr` header")),
    }
}

/// Parse `key value` lines (edge colorings, vertex colorings, class maps,
/// orientations).
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>, FormatError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        match parse_ids(i + 1, l)?.as_slice() {
            [a, b] => out.push((*a, *b)),
            _ => return Err(syntax(i + 1, "expected two integers")),
        }
    }
    Ok(out)
}

pub fn write_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> String {
    let mut s = String::new();
    for (a, b) in pairs {
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

/// Parse a bare id per line (matchings, independent sets).
pub fn parse_id_list(text: &str) -> Result<Vec<usize>, FormatError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        match parse_ids(i + 1, l)?.as_slice() {
            [a] => out.push(*a),
            _ => return Err(syntax(i + 1, "expected one integer")),
        }
    }
    Ok(out)
}

pub fn write_id_list(ids: &[usize]) -> String {
    let mut s = String::new();
    for id in ids {
        let _ = writeln!(s, "{id}");
    }
    s
}

/// Parse `edge-id: c1 c2 ...` lines into per-edge color lists. Every edge
/// `0..m` must appear exactly once.
pub fn parse_color_lists(text: &str, m: usize) -> Result<Vec<Vec<usize>>, FormatError> {
    let mut lists: Vec<Option<Vec<usize>>> = vec![None; m];
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        let (id, rest) = l
            .split_once(':')
            .ok_or_else(|| syntax(ln, "expected `edge-id: colors`"))?;
        let id: usize = id
            .trim()
            .parse()
            .map_err(|_| syntax(ln, format!("invalid edge id {id:?}")))?;
        if id >= m {
            return Err(syntax(ln, format!("edge id {id} out of range")));
        }
        if lists[id].is_some() {
            return Err(syntax(ln, format!("edge {id} listed twice")));
        }
        lists[id] = Some(parse_ids(ln, rest)?);
    }
    lists
        .into_iter()
        .enumerate()
        .map(|(e, l)| l.ok_or_else(|| syntax(0, format!("no color list for edge {e}"))))
        .collect()
}

pub fn write_color_lists(lists: &[Vec<usize>]) -> String {
    let mut s = String::new();
    for (e, l) in lists.iter().enumerate() {
        let cs: Vec<String> = l.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "{e}: {}", cs.join(" "));
    }
    s
}
