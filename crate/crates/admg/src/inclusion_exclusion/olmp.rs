//! Certificate for the ordered local Markov property of an ancestral set.

use crate::error::{Error, Result};
use crate::graph::{Admg, Order};
use crate::imset::SemiElemCombination;
use crate::separation::Triple;
use crate::vset::VertexSet;

/// How an emitted statement is justified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OlmpStep {
    /// A local statement `<r, R∖M | M∖r>` with `M` a collider closure; taken
    /// as given.
    Base,
    /// Follows from earlier statements by the semigraphoid rules.
    Derived,
}

fn tri(a: VertexSet, b: VertexSet, c: VertexSet) -> Triple {
    debug_assert!(a.is_disjoint(b) && a.is_disjoint(c) && b.is_disjoint(c));
    Triple { a, b, c }
}

/// Statements certifying `<b, A∖cl(b) | mb(b)>` for `b = max(A)`, with the
/// justification of each, including those from recursive calls.
pub fn olmp_annotated(g: &Admg, order: &Order, a: VertexSet) -> Result<Vec<(Triple, OlmpStep)>> {
    if !order.is_consistent_with(g) {
        return Err(Error::InvalidOrder("order is not consistent with the graph".into()));
    }
    if !g.is_ancestral_set(a) {
        return Err(Error::Precondition(format!(
            "`{{{}}}` is not ancestral",
            g.fmt_set(a)
        )));
    }
    let mut out = Vec::new();
    olmp_rec(g, order, a, &mut out)?;
    Ok(out)
}

/// [`olmp_annotated`] without the annotations.
pub fn olmp(g: &Admg, order: &Order, a: VertexSet) -> Result<SemiElemCombination> {
    let mut c = SemiElemCombination::new();
    for (t, _) in olmp_annotated(g, order, a)? {
        c.push(t);
    }
    Ok(c)
}

/// The largest ancestral `R` with `A ⊆ R ⊆ pre(b)` for which every member of
/// `co_{G[R]}(b)` lies in `A` or in the latent set `ml(A)` computed within
/// `R`. Offending vertices are dropped together with their descendants; at
/// worst this stops at `R = A`.
fn working_prefix(g: &Admg, order: &Order, a: VertexSet, b: usize) -> (VertexSet, VertexSet) {
    let bs = VertexSet::singleton(b);
    let dis_a = g.district_in(a, bs);
    let mut r = order.preceding(b);
    loop {
        let l = g.siblings_in(r, dis_a) - dis_a;
        let bad = g.co_vertex_in(r, b) - (a | l);
        if bad.is_empty() {
            return (r, l);
        }
        r -= g.descendants_in(r, bad);
    }
}

fn olmp_rec(
    g: &Admg,
    order: &Order,
    a: VertexSet,
    out: &mut Vec<(Triple, OlmpStep)>,
) -> Result<()> {
    let Some(b) = order.max_of(a) else {
        return Ok(());
    };
    let bs = VertexSet::singleton(b);
    let (r, l) = working_prefix(g, order, a, b);
    let m_r = g.co_vertex_in(r, b);
    let n_set = m_r - l;
    let big_b = bs | l;
    let big_c = m_r - big_b;
    let big_d = g.descendants_in(r, l) - l;
    let big_f = r - (m_r | big_d);
    let dis_b = g.district_in(r, bs);

    let mut ri = order.min_of(big_b).expect("b is in B");
    loop {
        let r_i = order.preceding(ri) & r;
        let before = r_i.without(ri);
        let (b_i, c_i, f_i) = (r_i & big_b, r_i & big_c, r_i & big_f);
        let c_prev = before & big_c;
        let rs = VertexSet::singleton(ri);
        if dis_b.contains(ri) {
            let m_i = g.co_vertex_in(r_i, ri);
            out.push((tri(rs, r_i - m_i, m_i - rs), OlmpStep::Base));
            out.push((tri(rs, f_i, (b_i | c_i) - rs), OlmpStep::Derived));
            if big_c.contains(ri) {
                out.push((tri(rs | b_i, f_i, c_prev), OlmpStep::Derived));
            }
        } else if (big_c | big_f).contains(ri) {
            olmp_rec(g, order, r_i - big_d, out)?;
            out.push((tri(b_i, rs, (c_i | f_i) - rs), OlmpStep::Derived));
            if big_c.contains(ri) {
                out.push((tri(b_i, rs | f_i, c_prev), OlmpStep::Derived));
            }
        }
        out.push((tri(b_i, f_i, c_i), OlmpStep::Derived));
        if ri == b {
            break;
        }
        ri = order.min_of(r - r_i).expect("b is still ahead");
    }
    let m = g.co_vertex_in(a, b);
    out.push((tri(bs, a - n_set, n_set - bs), OlmpStep::Derived));
    out.push((tri(bs, n_set - m, m - bs), OlmpStep::Base));
    out.push((tri(bs, a - m, m - bs), OlmpStep::Derived));
    Ok(())
}
