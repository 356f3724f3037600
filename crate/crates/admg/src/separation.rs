//! m-separation, independence models and minimal latent sets.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Admg, Order};
use crate::vset::VertexSet;

/// A disjoint triple `<a, b | c>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub a: VertexSet,
    pub b: VertexSet,
    pub c: VertexSet,
}

impl Triple {
    pub fn new(a: VertexSet, b: VertexSet, c: VertexSet) -> Result<Self> {
        if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
            return Err(Error::Precondition(format!(
                "triple sets overlap: {a:?}, {b:?}, {c:?}"
            )));
        }
        Ok(Triple { a, b, c })
    }

    /// The same statement with `a` and `b` swapped.
    pub fn swapped(self) -> Self {
        Triple {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }

    /// Representative with `a <= b` as bitmasks.
    pub fn canonical(self) -> Self {
        if self.a <= self.b {
            self
        } else {
            self.swapped()
        }
    }

    /// True when one of the independent sides is empty.
    pub fn is_trivial(&self) -> bool {
        self.a.is_empty() || self.b.is_empty()
    }

    pub fn union(&self) -> VertexSet {
        self.a | self.b | self.c
    }

    pub fn fmt(&self, g: &Admg) -> String {
        format!(
            "<{},{}|{}>",
            g.fmt_set(self.a),
            g.fmt_set(self.b),
            g.fmt_set(self.c)
        )
    }
}

/// Vertices `y` such that some m-connecting path between `a` and `y` given
/// `c` exists in `G[dom]`. `a` itself is not reported.
///
/// Search over states `(vertex, arrived by an arrowhead)`: a vertex is a
/// collider when we arrived with an arrowhead and leave along an edge that
/// also points into it.
pub fn m_reachable_in(g: &Admg, dom: VertexSet, a: usize, c: VertexSet) -> VertexSet {
    let anc_c = g.ancestors_in(dom, c);
    let mut seen = vec![[false; 2]; g.n()];
    let mut reached = VertexSet::EMPTY;
    let mut stack: Vec<(usize, bool)> = Vec::new();
    let expand = |x: usize, tail_ok: bool, head_ok: bool, stack: &mut Vec<(usize, bool)>| {
        if tail_ok {
            stack.extend((g.ch_of(x) & dom).iter().map(|y| (y, true)));
        }
        if head_ok {
            stack.extend((g.sib_of(x) & dom).iter().map(|y| (y, true)));
            stack.extend((g.pa_of(x) & dom).iter().map(|y| (y, false)));
        }
    };
    expand(a, true, true, &mut stack);
    while let Some((x, arrow)) = stack.pop() {
        if seen[x][arrow as usize] {
            continue;
        }
        seen[x][arrow as usize] = true;
        reached = reached.with(x);
        let non_collider_ok = !c.contains(x);
        let collider_ok = anc_c.contains(x);
        // leaving by a tail makes x a non-collider; leaving by an arrowhead
        // makes it a collider exactly when we also arrived by one
        expand(
            x,
            non_collider_ok,
            if arrow { collider_ok } else { non_collider_ok },
            &mut stack,
        );
    }
    reached - c - VertexSet::singleton(a)
}

/// Whether an m-connecting path between `a` and `b` given `c` exists.
pub fn m_connecting_exists(g: &Admg, a: usize, b: usize, c: VertexSet) -> bool {
    m_reachable_in(g, g.all(), a, c).contains(b)
}

/// `m_connecting_exists` within `G[dom]`.
pub fn m_connecting_exists_in(g: &Admg, dom: VertexSet, a: usize, b: usize, c: VertexSet) -> bool {
    m_reachable_in(g, dom, a, c).contains(b)
}

/// No member of `a` is m-connected to a member of `b` given `c`.
pub fn m_separated(g: &Admg, a: VertexSet, b: VertexSet, c: VertexSet) -> Result<bool> {
    m_separated_in(g, g.all(), a, b, c)
}

pub fn m_separated_in(
    g: &Admg,
    dom: VertexSet,
    a: VertexSet,
    b: VertexSet,
    c: VertexSet,
) -> Result<bool> {
    let t = Triple::new(a, b, c)?;
    if !t.union().is_subset(dom) {
        return Err(Error::Precondition("triple outside the vertex set".into()));
    }
    if t.is_trivial() {
        return Ok(true);
    }
    // search from the smaller side
    let (from, to) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    Ok(from
        .iter()
        .all(|x| (m_reachable_in(g, dom, x, c) & to).is_empty()))
}

pub fn triple_holds(g: &Admg, t: &Triple) -> bool {
    m_separated(g, t.a, t.b, t.c).unwrap_or(false)
}

/// Largest graph accepted by [`independence_model`].
pub const INDEPENDENCE_MODEL_LIMIT: usize = 8;

/// The independence model of a graph, stored as its pairwise statements
/// `<a, b | C>` with `a < b`. Statements with larger sides hold exactly when
/// all their pairwise statements hold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndependenceModel {
    n: usize,
    pairs: BTreeSet<(usize, usize, VertexSet)>,
}

impl IndependenceModel {
    pub fn contains_pair(&self, a: usize, b: usize, c: VertexSet) -> bool {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.pairs.contains(&(a, b, c))
    }

    pub fn contains(&self, t: &Triple) -> bool {
        t.a.iter()
            .all(|x| t.b.iter().all(|y| self.contains_pair(x, y, t.c)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = Triple> + '_ {
        self.pairs.iter().map(|&(a, b, c)| Triple {
            a: VertexSet::singleton(a),
            b: VertexSet::singleton(b),
            c,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }
}

pub fn independence_model(g: &Admg) -> Result<IndependenceModel> {
    let n = g.n();
    if n > INDEPENDENCE_MODEL_LIMIT {
        return Err(Error::TooManyVertices {
            got: n,
            limit: INDEPENDENCE_MODEL_LIMIT,
        });
    }
    let mut pairs = BTreeSet::new();
    for a in 0..n {
        for c in (g.all().without(a)).subsets() {
            let reach = m_reachable_in(g, g.all(), a, c);
            for b in g.all() - c - VertexSet::singleton(a) {
                if b > a && !reach.contains(b) {
                    pairs.insert((a, b, c));
                }
            }
        }
    }
    Ok(IndependenceModel { n, pairs })
}

/// `sib_{G[R]}(dis_{G[A]}(b)) \ dis_{G[A]}(b)` with `b = max(A)` and
/// `R = pre(b)`: the vertices before `b` whose marginalization would change
/// `b`'s Markov boundary in `G[A]`.
pub fn minimal_latent_set(g: &Admg, order: &Order, a: VertexSet) -> Result<VertexSet> {
    if !g.is_ancestral_set(a) {
        return Err(Error::Precondition("set is not ancestral".into()));
    }
    let Some(b) = order.max_of(a) else {
        return Ok(VertexSet::EMPTY);
    };
    let r = order.preceding(b);
    let d = g.district_in(a, VertexSet::singleton(b));
    Ok(g.siblings_in(r, d) - d)
}
