use super::Admg;
use crate::error::{Error, Result};
use crate::vset::VertexSet;

/// A total order on the vertices of a graph, stored as a sequence with an
/// inverse position table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Order {
    seq: Vec<usize>,
    pos: Vec<usize>,
}

impl Order {
    pub(crate) fn from_seq_unchecked(seq: Vec<usize>) -> Self {
        let mut pos = vec![0; seq.len()];
        for (i, &v) in seq.iter().enumerate() {
            pos[v] = i;
        }
        Order { seq, pos }
    }

    /// Validates that `seq` is a permutation of the vertices of `g` and that
    /// no vertex precedes one of its ancestors.
    pub fn new(g: &Admg, seq: Vec<usize>) -> Result<Self> {
        let n = g.n();
        if seq.len() != n {
            return Err(Error::InvalidOrder(format!(
                "expected {n} vertices, got {}",
                seq.len()
            )));
        }
        let mut seen = VertexSet::EMPTY;
        for &v in &seq {
            if v >= n || seen.contains(v) {
                return Err(Error::InvalidOrder("not a permutation".into()));
            }
            if !g.pa_of(v).is_subset(seen) {
                return Err(Error::InvalidOrder(format!(
                    "`{}` is placed before one of its parents",
                    g.name(v)
                )));
            }
            seen = seen.with(v);
        }
        Ok(Order::from_seq_unchecked(seq))
    }

    /// Parses a comma or whitespace separated list of names.
    pub fn from_names(g: &Admg, list: &str) -> Result<Self> {
        let mut seq = Vec::new();
        for tok in list.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            seq.push(
                g.index_of(tok)
                    .ok_or_else(|| Error::UnknownVertex(tok.to_string()))?,
            );
        }
        Order::new(g, seq)
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    /// `pre(b)`: `b` and every vertex before it.
    pub fn preceding(&self, b: usize) -> VertexSet {
        VertexSet::from_iter(self.seq[..=self.pos[b]].iter().copied())
    }

    /// Vertices strictly before `b`.
    pub fn strictly_preceding(&self, b: usize) -> VertexSet {
        VertexSet::from_iter(self.seq[..self.pos[b]].iter().copied())
    }

    /// Greatest member of `a` under the order.
    pub fn max_of(&self, a: VertexSet) -> Option<usize> {
        a.iter().max_by_key(|&v| self.pos[v])
    }

    /// Least member of `a` under the order.
    pub fn min_of(&self, a: VertexSet) -> Option<usize> {
        a.iter().min_by_key(|&v| self.pos[v])
    }

    /// `pre(a)` for a set: everything up to its greatest member.
    pub fn preceding_set(&self, a: VertexSet) -> VertexSet {
        self.max_of(a)
            .map_or(VertexSet::EMPTY, |b| self.preceding(b))
    }

    /// Checks the order against a graph.
    pub fn is_consistent_with(&self, g: &Admg) -> bool {
        Order::new(g, self.seq.clone()).is_ok()
    }

    pub fn fmt_names(&self, g: &Admg) -> String {
        self.seq
            .iter()
            .map(|&v| g.name(v))
            .collect::<Vec<_>>()
            .join(",")
    }
}
