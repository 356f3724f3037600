//! Text and JSON graph formats.
//!
//! ```text
//! # comment
//! vertices: a b c d
//! a -> b
//! b <-> d
//! order: a b c d
//! ```

use serde::{Deserialize, Serialize};

use super::{Admg, Order};
use crate::error::{Error, Result};

/// A graph together with the order declared in its file, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedGraph {
    pub graph: Admg,
    pub order: Option<Order>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the line-oriented text format. Errors carry 1-based line numbers.
pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut names: Option<(usize, Vec<String>)> = None;
    let mut directed: Vec<(usize, usize, usize)> = Vec::new();
    let mut bidirected: Vec<(usize, usize, usize)> = Vec::new();
    let mut order: Option<(usize, Vec<usize>)> = None;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            if names.is_some() {
                return Err(perr(ln, "second `vertices:` line"));
            }
            let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            for (k, a) in list.iter().enumerate() {
                if list[..k].contains(a) {
                    return Err(perr(ln, format!("duplicate vertex `{a}`")));
                }
                if !a.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(perr(ln, format!("bad vertex name `{a}`")));
                }
            }
            names = Some((ln, list));
            continue;
        }
        let Some((_, vs)) = names.as_ref() else {
            return Err(perr(ln, "expected `vertices:` before other lines"));
        };
        let lookup = |s: &str| {
            vs.iter()
                .position(|x| x == s)
                .ok_or_else(|| perr(ln, format!("unknown vertex `{s}`")))
        };
        if let Some(rest) = line.strip_prefix("order:") {
            if order.is_some() {
                return Err(perr(ln, "second `order:` line"));
            }
            let seq = rest
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(lookup)
                .collect::<Result<Vec<_>>>()?;
            order = Some((ln, seq));
        } else if let Some((a, b)) = line.split_once("<->") {
            let (a, b) = (a.trim(), b.trim());
            if a.is_empty() || b.is_empty() || b.contains(char::is_whitespace) {
                return Err(perr(ln, format!("malformed edge `{line}`")));
            }
            bidirected.push((ln, lookup(a)?, lookup(b)?));
        } else if let Some((a, b)) = line.split_once("->") {
            let (a, b) = (a.trim(), b.trim());
            if a.is_empty() || b.is_empty() || b.contains(char::is_whitespace) {
                return Err(perr(ln, format!("malformed edge `{line}`")));
            }
            directed.push((ln, lookup(a)?, lookup(b)?));
        } else {
            return Err(perr(ln, format!("malformed line `{line}`")));
        }
    }

    let Some((vline, vs)) = names else {
        return Err(perr(1, "missing `vertices:` line"));
    };
    for &(ln, a, b) in directed.iter().chain(&bidirected) {
        if a == b {
            return Err(perr(ln, format!("self-loop at `{}`", vs[a])));
        }
    }
    let d: Vec<(usize, usize)> = directed.iter().map(|&(_, a, b)| (a, b)).collect();
    let bi: Vec<(usize, usize)> = bidirected.iter().map(|&(_, a, b)| (a, b)).collect();
    let graph = Admg::new(&vs, &d, &bi).map_err(|e| match e {
        Error::DirectedCycle(v) => {
            // report the last directed edge line that touches the cycle vertex
            let ln = directed
                .iter()
                .rev()
                .find(|&&(_, a, b)| vs[a] == v || vs[b] == v)
                .map_or(vline, |&(ln, _, _)| ln);
            perr(ln, format!("directed cycle through `{v}`"))
        }
        other => perr(vline, other.to_string()),
    })?;
    let order = match order {
        None => None,
        Some((ln, seq)) => Some(Order::new(&graph, seq).map_err(|e| perr(ln, e.to_string()))?),
    };
    Ok(ParsedGraph { graph, order })
}

/// JSON mirror of the text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub directed: Vec<[String; 2]>,
    #[serde(default)]
    pub bidirected: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

pub fn parse_graph_json(text: &str) -> Result<ParsedGraph> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    j.to_graph()
}

impl GraphJson {
    pub fn from_graph(g: &Admg, order: Option<&Order>) -> Self {
        let nm = |v: usize| g.name(v).to_string();
        GraphJson {
            vertices: g.names().to_vec(),
            directed: g
                .directed_edges()
                .into_iter()
                .map(|(a, b)| [nm(a), nm(b)])
                .collect(),
            bidirected: g
                .bidirected_edges()
                .into_iter()
                .map(|(a, b)| [nm(a), nm(b)])
                .collect(),
            order: order.map(|o| o.seq().iter().map(|&v| nm(v)).collect()),
        }
    }

    pub fn to_graph(&self) -> Result<ParsedGraph> {
        let idx = |s: &String| {
            self.vertices
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::UnknownVertex(s.clone()))
        };
        let d = self
            .directed
            .iter()
            .map(|[a, b]| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let bi = self
            .bidirected
            .iter()
            .map(|[a, b]| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let graph = Admg::new(&self.vertices, &d, &bi)?;
        let order = match &self.order {
            None => None,
            Some(seq) => Some(Order::new(
                &graph,
                seq.iter().map(idx).collect::<Result<Vec<_>>>()?,
            )?),
        };
        Ok(ParsedGraph { graph, order })
    }
}

impl Admg {
    /// Renders the text format; `parse_graph` reads it back unchanged.
    pub fn to_text(&self, order: Option<&Order>) -> String {
        let mut s = format!("vertices: {}\n", self.names().join(" "));
        for (a, b) in self.directed_edges() {
            s += &format!("{} -> {}\n", self.name(a), self.name(b));
        }
        for (a, b) in self.bidirected_edges() {
            s += &format!("{} <-> {}\n", self.name(a), self.name(b));
        }
        if let Some(o) = order {
            let names: Vec<&str> = o.seq().iter().map(|&v| self.name(v)).collect();
            s += &format!("order: {}\n", names.join(" "));
        }
        s
    }

    /// One-line edge listing such as `a->b,b<->d`; empty graphs give `-`.
    pub fn edge_summary(&self) -> String {
        let mut parts: Vec<String> = self
            .directed_edges()
            .into_iter()
            .map(|(a, b)| format!("{}->{}", self.name(a), self.name(b)))
            .collect();
        parts.extend(
            self.bidirected_edges()
                .into_iter()
                .map(|(a, b)| format!("{}<->{}", self.name(a), self.name(b))),
        );
        if parts.is_empty() {
            "-".into()
        } else {
            parts.join(" ")
        }
    }
}
