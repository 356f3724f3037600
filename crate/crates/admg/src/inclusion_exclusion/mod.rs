//! Inclusion-exclusion decomposition of the non-m-connecting imset.
//!
//! [`nie`] writes `n_g = i − e` where both `i` and `e` are sums of set
//! indicators `δ_{b, N∖M | M∖b}` whose Möbius transforms are semi-elementary
//! imsets. The triples themselves are returned as certificates.

mod closure;
mod olmp;
mod verify;

pub use closure::SemigraphoidClosure;
pub use olmp::{olmp, olmp_annotated, OlmpStep};
pub use verify::{verify_decomposition, VerifyReport};

use crate::error::{Error, Result};
use crate::graph::{Admg, Order};
use crate::heads_tails::ParamFamily;
use crate::imset::{Imset, SemiElemCombination};
use crate::separation::Triple;
use crate::vset::VertexSet;

/// Guard on the number of pairs for one vertex; the `J, K` loops visit
/// `3^k` index pairs.
pub const MAX_PAIRS: usize = 14;

/// Constrained sets `ns` and their parameterizing cores `ms`, index-aligned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairsResult {
    pub ms: Vec<VertexSet>,
    pub ns: Vec<VertexSet>,
}

/// Pairs for a barren vertex `b` of `G[dom]`, given the parameterizing sets
/// of `G[dom]`.
///
/// Repeatedly takes the inclusion-maximal remaining constrained set `N`
/// containing `b` (smallest bitmask on ties), pairs it with the largest
/// parameterizing `M` with `b ∈ M ⊆ N`, and discards every remaining set `S`
/// with `b ∈ S ⊆ N`, `S ⊄ M`.
pub fn pairs_in(g: &Admg, fam: &ParamFamily, dom: VertexSet, b: usize) -> Result<PairsResult> {
    if !dom.contains(b) || !g.barren_in(dom, dom).contains(b) {
        return Err(Error::Precondition(format!(
            "`{}` is not barren in the given vertex set",
            g.name(b)
        )));
    }
    let bs = VertexSet::singleton(b);
    let mut rest: Vec<VertexSet> = (dom - bs)
        .subsets()
        .map(|s| s | bs)
        .filter(|&s| !fam.contains(s))
        .collect();
    let mut out = PairsResult {
        ms: Vec::new(),
        ns: Vec::new(),
    };
    while !rest.is_empty() {
        // maximal elements; pick the smallest bitmask among them
        let n = *rest
            .iter()
            .filter(|&&s| !rest.iter().any(|&t| t != s && s.is_subset(t)))
            .min()
            .unwrap();
        let below: Vec<VertexSet> = (n - bs)
            .subsets()
            .map(|s| s | bs)
            .filter(|&s| fam.contains(s))
            .collect();
        let m = below.iter().fold(VertexSet::EMPTY, |u, &s| u | s);
        if !fam.contains(m) {
            return Err(Error::Precondition(format!(
                "no unique largest parameterizing set inside `{{{}}}`",
                g.fmt_set(n)
            )));
        }
        rest.retain(|&s| !(s.is_subset(n) && !s.is_subset(m)));
        out.ms.push(m);
        out.ns.push(n);
    }
    Ok(out)
}

/// Pairs over the whole graph.
pub fn pairs(g: &Admg, b: usize) -> Result<PairsResult> {
    pairs_in(g, &ParamFamily::new(g), g.all(), b)
}

/// Output of [`nie`] and [`nie_nonredundant`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NieResult {
    pub inclusion: Imset,
    pub exclusion: Imset,
    /// Triples whose set indicators sum to `inclusion`; their semi-elementary
    /// imsets sum to `mobius_up(inclusion)`.
    pub inclusion_cert: SemiElemCombination,
    pub exclusion_cert: SemiElemCombination,
    /// Pairs computed for each vertex, from last to first in the order.
    pub pairs: Vec<(usize, PairsResult)>,
}

impl NieResult {
    pub fn difference(&self) -> Result<Imset> {
        self.inclusion.checked_sub(&self.exclusion)
    }
}

/// One inclusion-exclusion term: the triple `<b, N∖M | M∖b>` together with
/// the sign it carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Term {
    n: VertexSet,
    m: VertexSet,
    include: bool,
}

/// Terms for one vertex in `J`, then `K`, increasing bitmask order. Terms
/// with an empty family (`N_J ⊆ M_{J,K}`) are dropped.
fn vertex_terms(p: &PairsResult) -> Result<Vec<Term>> {
    let k = p.ns.len();
    if k > MAX_PAIRS {
        return Err(Error::Precondition(format!(
            "{k} pairs for one vertex exceeds the limit of {MAX_PAIRS}"
        )));
    }
    let mut out = Vec::new();
    for j in 1u32..(1 << k) {
        let js = VertexSet::from_bits(j);
        let nj = js.iter().fold(VertexSet::full(25), |s, i| s & p.ns[i]);
        for kk in js.nonempty_subsets() {
            let mk = kk.iter().fold(nj, |s, i| s & p.ms[i]);
            if nj.is_subset(mk) {
                continue;
            }
            out.push(Term {
                n: nj,
                m: mk,
                include: (js - kk).len().is_multiple_of(2),
            });
        }
    }
    Ok(out)
}

fn term_triple(b: usize, t: &Term) -> Triple {
    let bs = VertexSet::singleton(b);
    Triple {
        a: bs,
        b: t.n - t.m,
        c: t.m - bs,
    }
}

fn run(g: &Admg, order: &Order, nonredundant: bool) -> Result<NieResult> {
    if !order.is_consistent_with(g) {
        return Err(Error::InvalidOrder("order is not consistent with the graph".into()));
    }
    let n = g.n();
    let mut res = NieResult {
        inclusion: Imset::zero(n),
        exclusion: Imset::zero(n),
        inclusion_cert: SemiElemCombination::new(),
        exclusion_cert: SemiElemCombination::new(),
        pairs: Vec::new(),
    };
    let mut a = g.all();
    for &b in order.seq().iter().rev() {
        let fam = ParamFamily::new_in(g, a);
        let p = pairs_in(g, &fam, a, b)?;
        let terms = vertex_terms(&p)?;
        let (inc, exc) = if nonredundant {
            cancel_terms(terms)
        } else {
            terms.into_iter().partition(|t| t.include)
        };
        for (list, imset, cert) in [
            (inc, &mut res.inclusion, &mut res.inclusion_cert),
            (exc, &mut res.exclusion, &mut res.exclusion_cert),
        ] {
            for t in list {
                let tr = term_triple(b, &t);
                imset.add_assign_checked(&Imset::delta_triple(n, &tr))?;
                cert.push(tr);
            }
        }
        res.pairs.push((b, p));
        a = a.without(b);
    }
    Ok(res)
}

/// Sorts terms into inclusion and exclusion lists, letting a term cancel an
/// identical pending term of the opposite sign instead of being recorded.
fn cancel_terms(terms: Vec<Term>) -> (Vec<Term>, Vec<Term>) {
    let mut inc: Vec<Term> = Vec::new();
    let mut exc: Vec<Term> = Vec::new();
    for t in terms {
        let (same, other) = if t.include {
            (&mut inc, &mut exc)
        } else {
            (&mut exc, &mut inc)
        };
        if let Some(pos) = other.iter().position(|o| o.n == t.n && o.m == t.m) {
            other.remove(pos);
        } else {
            same.push(t);
        }
    }
    (inc, exc)
}

/// Inclusion-exclusion over the pairs of each vertex, from the last vertex
/// of the order to the first, each time within the graph induced by the
/// vertices not yet processed.
pub fn nie(g: &Admg, order: &Order) -> Result<NieResult> {
    run(g, order, false)
}

/// As [`nie`], but a term equal to a pending term of the opposite sign for
/// the same vertex cancels it.
pub fn nie_nonredundant(g: &Admg, order: &Order) -> Result<NieResult> {
    run(g, order, true)
}

#[cfg(test)]
mod tests;
