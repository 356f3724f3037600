//! Heads, tails, parameterizing sets and the m-connecting imset.

use crate::error::{Error, Result};
use crate::graph::Admg;
use crate::imset::Imset;
use crate::separation::m_reachable_in;
use crate::vset::VertexSet;

/// Above this many vertices heads are found district by district instead of
/// by sweeping every subset.
pub const DIRECT_SWEEP_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeadTail {
    pub head: VertexSet,
    pub tail: VertexSet,
}

/// Heads of `G[dom]` found as barren subsets of collider-connecting sets,
/// by checking every non-empty subset of `dom`. Sorted by bitmask.
pub fn heads_by_sweep(g: &Admg, dom: VertexSet) -> Vec<VertexSet> {
    let mut seen = vec![false; 1 << g.n()];
    for c in dom.nonempty_subsets() {
        if g.collider_connected_in(c, c).ok() == Some(c) {
            seen[g.barren_in(dom, c).index()] = true;
        }
    }
    (1..seen.len())
        .filter(|&i| seen[i])
        .map(|i| VertexSet::from_bits(i as u32))
        .collect()
}

/// Heads of `G[dom]` found inside each district: `H` is a head when it is
/// barren and lies in a single district of `G[an(H)]`. Sorted by bitmask.
pub fn heads_by_district(g: &Admg, dom: VertexSet) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for d in g.districts_in(dom) {
        for h in d.nonempty_subsets() {
            if g.barren_in(dom, h) != h {
                continue;
            }
            let an = g.ancestors_in(dom, h);
            let first = VertexSet::singleton(h.first().unwrap());
            if h.is_subset(g.district_in(an, first)) {
                out.push(h);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Heads of `G[dom]`, sorted by bitmask.
pub fn heads_in(g: &Admg, dom: VertexSet) -> Vec<VertexSet> {
    if dom.len() <= DIRECT_SWEEP_LIMIT {
        heads_by_sweep(g, dom)
    } else {
        heads_by_district(g, dom)
    }
}

pub fn heads(g: &Admg) -> Vec<VertexSet> {
    heads_in(g, g.all())
}

/// `co_{G[an(H)]}(H) \ H`, without checking that `h` is a head.
pub fn tail_unchecked_in(g: &Admg, dom: VertexSet, h: VertexSet) -> VertexSet {
    let an = g.ancestors_in(dom, h);
    g.collider_connected_in(an, h)
        .map_or(VertexSet::EMPTY, |co| co - h)
}

/// Tail of a head; fails if `h` is not a head.
pub fn tail(g: &Admg, h: VertexSet) -> Result<VertexSet> {
    if !is_head(g, h) {
        return Err(Error::Precondition(format!(
            "`{{{}}}` is not a head",
            g.fmt_set(h)
        )));
    }
    Ok(tail_unchecked_in(g, g.all(), h))
}

pub fn is_head(g: &Admg, h: VertexSet) -> bool {
    if h.is_empty() || !h.is_subset(g.all()) || g.barren_subset(h) != h {
        return false;
    }
    let an = g.ancestors(h);
    h.is_subset(g.district_in(an, VertexSet::singleton(h.first().unwrap())))
}

/// The parameterizing sets of `G[dom]` as a membership table over all
/// subsets of the full vertex set, together with the heads and tails that
/// generate them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamFamily {
    n: usize,
    dom: VertexSet,
    table: Vec<bool>,
    heads: Vec<HeadTail>,
}

impl ParamFamily {
    pub fn new(g: &Admg) -> Self {
        ParamFamily::new_in(g, g.all())
    }

    pub fn new_in(g: &Admg, dom: VertexSet) -> Self {
        let heads: Vec<HeadTail> = heads_in(g, dom)
            .into_iter()
            .map(|h| HeadTail {
                head: h,
                tail: tail_unchecked_in(g, dom, h),
            })
            .collect();
        let mut table = vec![false; 1 << g.n()];
        for ht in &heads {
            for t in ht.tail.subsets() {
                table[(ht.head | t).index()] = true;
            }
        }
        ParamFamily {
            n: g.n(),
            dom,
            table,
            heads,
        }
    }

    #[inline]
    pub fn contains(&self, s: VertexSet) -> bool {
        self.table[s.index()]
    }

    pub fn heads(&self) -> &[HeadTail] {
        &self.heads
    }

    pub fn domain(&self) -> VertexSet {
        self.dom
    }

    /// Parameterizing sets in increasing bitmask order.
    pub fn sets(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.dom.nonempty_subsets().filter(|&s| self.contains(s))
    }

    /// Non-empty subsets of the domain that are not parameterizing.
    pub fn constrained(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.dom.nonempty_subsets().filter(|&s| !self.contains(s))
    }

    /// Size of the largest parameterizing set.
    pub fn max_size(&self) -> usize {
        self.heads
            .iter()
            .map(|ht| (ht.head | ht.tail).len())
            .max()
            .unwrap_or(0)
    }

    /// Canonical key: the membership table packed into 64-bit words.
    pub fn key(&self) -> Vec<u64> {
        let mut words = vec![0u64; self.table.len().div_ceil(64)];
        for (i, &b) in self.table.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        words
    }

    /// Indicator of the parameterizing sets plus `∅`.
    pub fn m_imset(&self) -> Imset {
        let mut u = Imset::delta_family(self.n, self.sets());
        u.set(VertexSet::EMPTY, 1);
        u
    }

    /// Indicator of the constrained sets.
    pub fn n_imset(&self) -> Imset {
        Imset::delta_family(self.n, self.constrained())
    }
}

pub fn parameterizing_sets(g: &Admg) -> ParamFamily {
    ParamFamily::new(g)
}

pub fn constrained_sets(g: &Admg) -> Vec<VertexSet> {
    ParamFamily::new(g).constrained().collect()
}

pub fn m_imset(g: &Admg) -> Imset {
    ParamFamily::new(g).m_imset()
}

pub fn n_imset(g: &Admg) -> Imset {
    ParamFamily::new(g).n_imset()
}

/// `S ⊆ co_{G[an(S)]}(ba(S))`, an equivalent test for `S` being
/// parameterizing (or empty).
pub fn parameterizing_by_closure(g: &Admg, s: VertexSet) -> bool {
    if s.is_empty() {
        return true;
    }
    let an = g.ancestors(s);
    let ba = g.barren_subset(s);
    g.collider_connected_in(an, ba)
        .is_ok_and(|co| s.is_subset(co))
}

/// The m-connecting imset read straight from m-separation: `S` scores 1
/// when every `<a, b | C>` with `S \ C = {a, b}` is m-connecting.
pub fn m_imset_from_separation(g: &Admg) -> Imset {
    let v = g.all();
    let mut u = Imset::zero(g.n());
    for s in v.subsets() {
        let outside = v - s;
        let mut ok = true;
        'pairs: for a in s {
            for b in s {
                if b <= a {
                    continue;
                }
                let base = s.without(a).without(b);
                for extra in outside.subsets() {
                    if !m_reachable_in(g, v, a, base | extra).contains(b) {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        u.set(s, ok as i64);
    }
    u
}

/// For a DAG: 1 on sets of size at most one, and on larger `S` exactly when
/// some `a ∈ S` has `S \ a ⊆ pa(a)`.
pub fn characteristic_imset(g: &Admg) -> Result<Imset> {
    if !g.is_dag() {
        return Err(Error::Precondition(
            "characteristic imset needs a graph without bidirected edges".into(),
        ));
    }
    let mut u = Imset::zero(g.n());
    for s in g.all().subsets() {
        let v = s.len() <= 1 || s.iter().any(|a| s.without(a).is_subset(g.pa_of(a)));
        u.set(s, v as i64);
    }
    Ok(u)
}

/// Richardson's partition of `s` into heads: take the heads inside `s` that
/// are maximal under `H ≤ H' ⟺ H ⊆ an(H')`, remove them and repeat on what
/// is left. Within one round heads are listed by their sorted member lists.
pub fn richardson_partition(g: &Admg, s: VertexSet) -> Vec<VertexSet> {
    let all_heads = heads(g);
    let an: Vec<VertexSet> = all_heads.iter().map(|&h| g.ancestors(h)).collect();
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let inside: Vec<usize> = (0..all_heads.len())
            .filter(|&i| all_heads[i].is_subset(rest))
            .collect();
        let mut round: Vec<VertexSet> = inside
            .iter()
            .filter(|&&i| {
                !inside
                    .iter()
                    .any(|&j| j != i && all_heads[i].is_subset(an[j]))
            })
            .map(|&i| all_heads[i])
            .collect();
        if round.is_empty() {
            // every vertex is a head, so this only happens on malformed input
            break;
        }
        round.sort_by_key(|h| h.iter().collect::<Vec<_>>());
        for h in &round {
            rest -= *h;
        }
        out.extend(round);
    }
    out
}

/// Heads of the partition of an ancestral set with their tails.
pub fn head_factorization(g: &Admg, a: VertexSet) -> Result<Vec<HeadTail>> {
    if !g.is_ancestral_set(a) {
        return Err(Error::Precondition(format!(
            "`{{{}}}` is not ancestral",
            g.fmt_set(a)
        )));
    }
    Ok(richardson_partition(g, a)
        .into_iter()
        .map(|h| HeadTail {
            head: h,
            tail: tail_unchecked_in(g, g.all(), h),
        })
        .collect())
}

#[cfg(test)]
mod tests;
