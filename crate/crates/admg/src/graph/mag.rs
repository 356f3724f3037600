//! Directed maximal ancestral graph validation.

use super::Admg;
use crate::vset::VertexSet;

impl Admg {
    /// At most one edge per pair, ancestral, and maximal.
    pub fn is_directed_mag(&self) -> bool {
        let n = self.n();
        for v in 0..n {
            if !(self.pa_of(v) & self.sib_of(v)).is_empty()
                || !(self.ch_of(v) & self.sib_of(v)).is_empty()
            {
                return false;
            }
        }
        // ancestral: no sibling is a proper ancestor
        let anc: Vec<VertexSet> = (0..n)
            .map(|v| self.ancestors(VertexSet::singleton(v)))
            .collect();
        for v in 0..n {
            if !(self.sib_of(v) & anc[v]).is_empty() {
                return false;
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if !self.adjacent(a, b) && self.has_inducing_path(a, b, anc[a] | anc[b]) {
                    return false;
                }
            }
        }
        true
    }

    /// Depth-first search for a path from `a` to `b` whose interior vertices
    /// are colliders lying in `allowed`.
    ///
    /// States are `(vertex, arrowhead at vertex on the edge we came by)`.
    /// An interior vertex can only be continued from if we arrived with an
    /// arrowhead and leave along an edge that also points into it.
    pub(crate) fn has_inducing_path(&self, a: usize, b: usize, allowed: VertexSet) -> bool {
        let n = self.n();
        let mut seen = vec![[false; 2]; n];
        let mut stack: Vec<(usize, bool)> = Vec::new();
        // first step out of a: any edge
        for x in self.ch_of(a) | self.sib_of(a) {
            if x == b {
                return true;
            }
            stack.push((x, true));
        }
        for x in self.pa_of(a) {
            if x == b {
                return true;
            }
            stack.push((x, false));
        }
        while let Some((x, arrow)) = stack.pop() {
            if seen[x][arrow as usize] {
                continue;
            }
            seen[x][arrow as usize] = true;
            if !arrow || !allowed.contains(x) || x == a {
                continue;
            }
            // leave x along an edge with an arrowhead at x
            for y in self.sib_of(x) {
                if y == b {
                    return true;
                }
                stack.push((y, true));
            }
            for y in self.pa_of(x) {
                if y == b {
                    return true;
                }
                stack.push((y, false));
            }
        }
        false
    }
}
