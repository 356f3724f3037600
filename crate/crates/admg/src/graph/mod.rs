//! Acyclic directed mixed graphs and their vertex-set functions.
//!
//! Every set function comes in two flavours: `f(a)` over the whole graph and
//! `f_in(dom, a)` over the induced subgraph `G[dom]` without re-indexing.
//! The `_in` forms are what the imset and scoring code use internally, since
//! they keep bitmasks comparable across subgraphs.

mod io;
mod mag;
mod order;

pub use io::{parse_graph, parse_graph_json, GraphJson, ParsedGraph};
pub use order::Order;

use crate::error::{Error, Result};
use crate::vset::{VertexSet, MAX_VERTICES};

/// An acyclic directed mixed graph on at most [`MAX_VERTICES`] labelled
/// vertices. A pair may carry both a directed and a bidirected edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Admg {
    names: Vec<String>,
    pa: Vec<VertexSet>,
    ch: Vec<VertexSet>,
    sib: Vec<VertexSet>,
}

impl Admg {
    /// Builds a graph from vertex names and index edge lists. Duplicate edges
    /// are merged.
    pub fn new<S: AsRef<str>>(
        names: &[S],
        directed: &[(usize, usize)],
        bidirected: &[(usize, usize)],
    ) -> Result<Self> {
        let n = names.len();
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                got: n,
                limit: MAX_VERTICES,
            });
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::DuplicateVertex(a.clone()));
            }
        }
        let mut g = Admg {
            pa: vec![VertexSet::EMPTY; n],
            ch: vec![VertexSet::EMPTY; n],
            sib: vec![VertexSet::EMPTY; n],
            names,
        };
        for &(a, b) in directed {
            g.check_edge(a, b)?;
            g.pa[b] = g.pa[b].with(a);
            g.ch[a] = g.ch[a].with(b);
        }
        for &(a, b) in bidirected {
            g.check_edge(a, b)?;
            g.sib[a] = g.sib[a].with(b);
            g.sib[b] = g.sib[b].with(a);
        }
        if let Some(v) = g.find_cycle_vertex() {
            return Err(Error::DirectedCycle(g.names[v].clone()));
        }
        Ok(g)
    }

    /// Same as [`Admg::new`] but with edges given by vertex name.
    pub fn from_names(
        names: &[&str],
        directed: &[(&str, &str)],
        bidirected: &[(&str, &str)],
    ) -> Result<Self> {
        let idx = |s: &str| {
            names
                .iter()
                .position(|&x| x == s)
                .ok_or_else(|| Error::UnknownVertex(s.to_string()))
        };
        let d = directed
            .iter()
            .map(|&(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let bi = bidirected
            .iter()
            .map(|&(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Admg::new(names, &d, &bi)
    }

    /// Graph with no edges on `n` vertices named `v0, v1, ...`, or `a, b, ...`
    /// when `n <= 26`.
    pub fn empty(n: usize) -> Result<Self> {
        Admg::new(&default_names(n), &[], &[])
    }

    fn check_edge(&self, a: usize, b: usize) -> Result<()> {
        let n = self.n();
        if a >= n || b >= n {
            return Err(Error::Precondition(format!(
                "edge ({a}, {b}) out of range for {n} vertices"
            )));
        }
        if a == b {
            return Err(Error::SelfLoop(self.names[a].clone()));
        }
        Ok(())
    }

    fn find_cycle_vertex(&self) -> Option<usize> {
        let n = self.n();
        let mut indeg: Vec<usize> = self.pa.iter().map(|p| p.len()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for c in self.ch[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    stack.push(c);
                }
            }
        }
        (seen < n).then(|| (0..n).find(|&v| indeg[v] > 0).unwrap())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.names.len()
    }

    /// The full vertex set.
    #[inline]
    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    /// Parses a comma or whitespace separated list of vertex names. When
    /// every name is a single character, `abd` also reads as `a,b,d`.
    pub fn set_from_names(&self, list: &str) -> Result<VertexSet> {
        let short = self.names.iter().all(|x| x.chars().count() == 1);
        let mut s = VertexSet::EMPTY;
        for tok in list.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            if let Some(v) = self.index_of(tok) {
                s = s.with(v);
            } else if short {
                for ch in tok.chars() {
                    let v = self
                        .index_of(ch.encode_utf8(&mut [0; 4]))
                        .ok_or_else(|| Error::UnknownVertex(tok.to_string()))?;
                    s = s.with(v);
                }
            } else {
                return Err(Error::UnknownVertex(tok.to_string()));
            }
        }
        Ok(s)
    }

    /// Renders a set as concatenated names when all names are one character,
    /// otherwise comma separated. The empty set renders as the empty string.
    pub fn fmt_set(&self, s: VertexSet) -> String {
        let short = self.names.iter().all(|x| x.chars().count() == 1);
        let parts: Vec<&str> = s.iter().map(|v| self.names[v].as_str()).collect();
        if short {
            parts.concat()
        } else {
            parts.join(",")
        }
    }

    /// A list of sets as `{{a,d},{b,c}}`, keeping the given order.
    pub fn fmt_family(&self, sets: &[VertexSet]) -> String {
        let inner: Vec<String> = sets
            .iter()
            .map(|s| {
                let names: Vec<&str> = s.iter().map(|v| self.names[v].as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Directed edges `(a, b)` meaning `a -> b`, sorted.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for b in 0..self.n() {
            for a in self.pa[b] {
                e.push((a, b));
            }
        }
        e.sort_unstable();
        e
    }

    /// Bidirected edges `(a, b)` with `a < b`, sorted.
    pub fn bidirected_edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for a in 0..self.n() {
            for b in self.sib[a] {
                if a < b {
                    e.push((a, b));
                }
            }
        }
        e
    }

    pub fn has_directed(&self, a: usize, b: usize) -> bool {
        self.pa[b].contains(a)
    }

    pub fn has_bidirected(&self, a: usize, b: usize) -> bool {
        self.sib[a].contains(b)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        (self.pa[a] | self.ch[a] | self.sib[a]).contains(b)
    }

    pub fn is_dag(&self) -> bool {
        self.sib.iter().all(|s| s.is_empty())
    }

    pub fn edge_count(&self) -> usize {
        self.directed_edges().len() + self.bidirected_edges().len()
    }

    // ----- disjunctive set functions -----

    #[inline]
    pub fn pa_of(&self, v: usize) -> VertexSet {
        self.pa[v]
    }

    #[inline]
    pub fn ch_of(&self, v: usize) -> VertexSet {
        self.ch[v]
    }

    #[inline]
    pub fn sib_of(&self, v: usize) -> VertexSet {
        self.sib[v]
    }

    pub fn parents_in(&self, dom: VertexSet, a: VertexSet) -> VertexSet {
        a.iter().fold(VertexSet::EMPTY, |s, v| s | self.pa[v]) & dom
    }

    pub fn children_in(&self, dom: VertexSet, a: VertexSet) -> VertexSet {
        a.iter().fold(VertexSet::EMPTY, |s, v| s | self.ch[v]) & dom
    }

    pub fn siblings_in(&self, dom: VertexSet, a: VertexSet) -> VertexSet {
        a.iter().fold(VertexSet::EMPTY, |s, v| s | self.sib[v]) & dom
    }

    /// Reflexive ancestors of `a` within `G[dom]`.
    pub fn ancestors_in(&self, dom: VertexSet, a: VertexSet) -> VertexSet {
        self.closure(dom, a & dom, &self.pa)
    }

    /// Reflexive descendants of `a` within `G[dom]`.
    pub fn descendants_in(&self, dom: VertexSet, a: VertexSet) -> VertexSet {
        self.closure(dom, a & dom, &self.ch)
    }

    /// Union of the districts of members of `a` within `G[dom]`.
    pub fn district_in(&self, dom: VertexSet, a: VertexSet) -> VertexSet {
        self.closure(dom, a & dom, &self.sib)
    }

    fn closure(&self, dom: VertexSet, start: VertexSet, adj: &[VertexSet]) -> VertexSet {
        let mut seen = start;
        let mut frontier = start;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next |= adj[v];
            }
            next &= dom - seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    pub fn parents(&self, a: VertexSet) -> VertexSet {
        self.parents_in(self.all(), a)
    }

    pub fn children(&self, a: VertexSet) -> VertexSet {
        self.children_in(self.all(), a)
    }

    pub fn siblings(&self, a: VertexSet) -> VertexSet {
        self.siblings_in(self.all(), a)
    }

    pub fn ancestors(&self, a: VertexSet) -> VertexSet {
        self.ancestors_in(self.all(), a)
    }

    pub fn descendants(&self, a: VertexSet) -> VertexSet {
        self.descendants_in(self.all(), a)
    }

    pub fn district(&self, a: VertexSet) -> VertexSet {
        self.district_in(self.all(), a)
    }

    /// All districts of `G[dom]`, ordered by smallest member.
    pub fn districts_in(&self, dom: VertexSet) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut rest = dom;
        while let Some(v) = rest.first() {
            let d = self.district_in(dom, VertexSet::singleton(v));
            out.push(d);
            rest -= d;
        }
        out
    }

    // ----- collider connection -----

    /// Vertices joined to `v` by a path in `G[dom]` whose interior vertices
    /// are all colliders, plus `v` itself.
    ///
    /// Such a path leaves `v` into its district or into a child's district,
    /// travels along bidirected edges and ends at a member of that district
    /// or one of its parents.
    pub fn co_vertex_in(&self, dom: VertexSet, v: usize) -> VertexSet {
        let vs = VertexSet::singleton(v);
        let d = self.district_in(dom, vs | self.children_in(dom, vs));
        d | self.parents_in(dom, d) | vs
    }

    /// Conjunctive collider connection: intersection of [`Admg::co_vertex_in`]
    /// over the members of `a`. Fails on an empty set.
    pub fn collider_connected_in(&self, dom: VertexSet, a: VertexSet) -> Result<VertexSet> {
        if a.is_empty() {
            return Err(Error::Precondition(
                "collider connection of an empty set".into(),
            ));
        }
        Ok(a.iter()
            .fold(dom, |s, v| s & self.co_vertex_in(dom, v)))
    }

    pub fn collider_connected(&self, a: VertexSet) -> Result<VertexSet> {
        self.collider_connected_in(self.all(), a)
    }

    // ----- special sets -----

    pub fn is_ancestral_set_in(&self, dom: VertexSet, a: VertexSet) -> bool {
        a.is_subset(dom) && self.ancestors_in(dom, a) == a
    }

    pub fn is_ancestral_set(&self, a: VertexSet) -> bool {
        self.is_ancestral_set_in(self.all(), a)
    }

    /// All ancestral sets, `∅` included, in increasing bitmask order.
    pub fn ancestral_sets(&self) -> Vec<VertexSet> {
        self.all()
            .subsets()
            .filter(|&a| self.is_ancestral_set(a))
            .collect()
    }

    /// `c == co_{G[c]}(c)` for non-empty `c`.
    pub fn is_collider_connecting_set(&self, c: VertexSet) -> bool {
        !c.is_empty()
            && c.is_subset(self.all())
            && (self.collider_connected_in(c, c) == Ok(c))
    }

    /// Members of `b` that are not ancestors (within `G[dom]`) of another
    /// member of `b`.
    pub fn barren_in(&self, dom: VertexSet, b: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for v in b {
            let vs = VertexSet::singleton(v);
            if (self.descendants_in(dom, vs) & b) == vs {
                out |= vs;
            }
        }
        out
    }

    pub fn barren_subset(&self, b: VertexSet) -> VertexSet {
        self.barren_in(self.all(), b)
    }

    // ----- Markov boundary -----

    pub fn markov_closure_in(&self, dom: VertexSet, b: usize) -> VertexSet {
        self.co_vertex_in(dom, b)
    }

    pub fn markov_boundary_in(&self, dom: VertexSet, b: usize) -> VertexSet {
        self.co_vertex_in(dom, b).without(b)
    }

    pub fn markov_closure(&self, b: usize) -> VertexSet {
        self.markov_closure_in(self.all(), b)
    }

    pub fn markov_boundary(&self, b: usize) -> VertexSet {
        self.markov_boundary_in(self.all(), b)
    }

    // ----- orders -----

    /// Topological order of the directed part, lowest index first among
    /// available vertices.
    pub fn consistent_order(&self) -> Order {
        let n = self.n();
        let mut placed = VertexSet::EMPTY;
        let mut seq = Vec::with_capacity(n);
        while seq.len() < n {
            let v = (0..n)
                .find(|&v| !placed.contains(v) && self.pa[v].is_subset(placed))
                .expect("graph is acyclic");
            placed = placed.with(v);
            seq.push(v);
        }
        Order::from_seq_unchecked(seq)
    }

    /// Every consistent order, in lexicographic order of sequences.
    pub fn all_consistent_orders(&self) -> Vec<Order> {
        let mut out = Vec::new();
        let mut seq = Vec::with_capacity(self.n());
        self.orders_rec(VertexSet::EMPTY, &mut seq, &mut out);
        out
    }

    fn orders_rec(&self, placed: VertexSet, seq: &mut Vec<usize>, out: &mut Vec<Order>) {
        if seq.len() == self.n() {
            out.push(Order::from_seq_unchecked(seq.clone()));
            return;
        }
        for v in self.all() - placed {
            if self.pa[v].is_subset(placed) {
                seq.push(v);
                self.orders_rec(placed.with(v), seq, out);
                seq.pop();
            }
        }
    }

    // ----- subgraphs -----

    /// `G[a]` with vertices re-indexed in their original relative order.
    pub fn induced_subgraph(&self, a: VertexSet) -> Admg {
        let keep: Vec<usize> = a.iter().filter(|&v| v < self.n()).collect();
        let pos = |v: usize| keep.iter().position(|&x| x == v).unwrap();
        let names: Vec<&str> = keep.iter().map(|&v| self.names[v].as_str()).collect();
        let mut d = Vec::new();
        let mut bi = Vec::new();
        for &(x, y) in &self.directed_edges() {
            if a.contains(x) && a.contains(y) {
                d.push((pos(x), pos(y)));
            }
        }
        for &(x, y) in &self.bidirected_edges() {
            if a.contains(x) && a.contains(y) {
                bi.push((pos(x), pos(y)));
            }
        }
        Admg::new(&names, &d, &bi).expect("induced subgraph of an ADMG is an ADMG")
    }

    /// Marginalizes the vertices of `l`, one at a time in increasing index
    /// order. For each latent vertex `l` and each path `a - l - b`: an
    /// `a -> l -> b` adds `a -> b`, and `a <- l -> b` or `a <-> l -> b` adds
    /// `a <-> b`. Then `l` is dropped.
    pub fn latent_project(&self, l: VertexSet) -> Admg {
        let mut pa = self.pa.clone();
        let mut ch = self.ch.clone();
        let mut sib = self.sib.clone();
        let mut alive = self.all();
        for lat in l & self.all() {
            let others = alive.without(lat);
            let p = pa[lat] & others;
            let c = ch[lat] & others;
            let s = sib[lat] & others;
            // a -> l -> b
            for a in p {
                for b in c {
                    if a != b {
                        pa[b] = pa[b].with(a);
                        ch[a] = ch[a].with(b);
                    }
                }
            }
            // a <- l -> b and a <-> l -> b
            for a in c | s {
                for b in c {
                    if a != b {
                        sib[a] = sib[a].with(b);
                        sib[b] = sib[b].with(a);
                    }
                }
            }
            alive = others;
        }
        let keep: Vec<usize> = alive.iter().collect();
        let pos = |v: usize| keep.iter().position(|&x| x == v).unwrap();
        let names: Vec<&str> = keep.iter().map(|&v| self.names[v].as_str()).collect();
        let mut d = Vec::new();
        let mut bi = Vec::new();
        for &b in &keep {
            for a in pa[b] & alive {
                d.push((pos(a), pos(b)));
            }
            for a in sib[b] & alive {
                if a < b {
                    bi.push((pos(a), pos(b)));
                }
            }
        }
        Admg::new(&names, &d, &bi).expect("latent projection of an ADMG is an ADMG")
    }

    /// Copy with a different set of vertex names.
    pub fn renamed<S: AsRef<str>>(&self, names: &[S]) -> Result<Admg> {
        if names.len() != self.n() {
            return Err(Error::Precondition("rename needs one name per vertex".into()));
        }
        Admg::new(names, &self.directed_edges(), &self.bidirected_edges())
    }
}

/// Bidirected path `v0 <-> v1 <-> ... <-> v(n-1)`.
pub fn bidirected_chain(n: usize) -> Result<Admg> {
    let e: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Admg::new(&default_names(n), &[], &e)
}

/// Bidirected cycle on `n >= 3` vertices.
pub fn bidirected_cycle(n: usize) -> Result<Admg> {
    if n < 3 {
        return Err(Error::Precondition("a cycle needs at least 3 vertices".into()));
    }
    let mut e: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    e.push((0, n - 1));
    Admg::new(&default_names(n), &[], &e)
}

/// Edge states of a vertex pair `(i, j)`, `i < j`, used by exhaustive
/// enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairState {
    None,
    Forward,
    Backward,
    Bidirected,
    ForwardAndBidirected,
    BackwardAndBidirected,
}

impl PairState {
    pub const ALL: [PairState; 6] = [
        PairState::None,
        PairState::Forward,
        PairState::Backward,
        PairState::Bidirected,
        PairState::ForwardAndBidirected,
        PairState::BackwardAndBidirected,
    ];
}

/// Vertex pairs `(i, j)` with `i < j` in lexicographic order.
pub fn vertex_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

/// Builds the graph with one state per pair (in [`vertex_pairs`] order), or
/// `None` if it has a directed cycle.
pub fn graph_from_states(n: usize, states: &[PairState]) -> Option<Admg> {
    let mut d = Vec::new();
    let mut bi = Vec::new();
    for (&(i, j), st) in vertex_pairs(n).iter().zip(states) {
        match st {
            PairState::None => {}
            PairState::Forward => d.push((i, j)),
            PairState::Backward => d.push((j, i)),
            PairState::Bidirected => bi.push((i, j)),
            PairState::ForwardAndBidirected => {
                d.push((i, j));
                bi.push((i, j));
            }
            PairState::BackwardAndBidirected => {
                d.push((j, i));
                bi.push((i, j));
            }
        }
    }
    Admg::new(&default_names(n), &d, &bi).ok()
}

/// Every ADMG on `n` labelled vertices, over the given per-pair states.
pub fn all_admgs(n: usize, states: &[PairState]) -> Vec<Admg> {
    let pairs = vertex_pairs(n).len();
    let k = states.len();
    let total = k.pow(pairs as u32);
    let mut out = Vec::new();
    let mut digits = vec![0usize; pairs];
    for code in 0..total {
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = c % k;
            c /= k;
        }
        let st: Vec<PairState> = digits.iter().map(|&d| states[d]).collect();
        if let Some(g) = graph_from_states(n, &st) {
            out.push(g);
        }
    }
    out
}

/// `a, b, c, ...` for up to 26 vertices, `v0, v1, ...` beyond.
pub fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("v{i}")).collect()
    }
}
