//! Closure of a set of independence statements under the semigraphoid rules
//! (symmetry, decomposition, weak union, contraction).

use crate::error::{Error, Result};
use crate::separation::Triple;
use crate::vset::VertexSet;

/// Largest vertex count accepted; the table has `4^n` entries.
pub const CLOSURE_LIMIT: usize = 8;

/// Every non-trivial statement derivable from those added so far.
pub struct SemigraphoidClosure {
    n: usize,
    present: Vec<bool>,
    count: usize,
}

/// Moves bit `v` of `x` to bit `2v`.
fn spread(x: VertexSet) -> usize {
    x.iter().fold(0usize, |acc, v| acc | 1 << (2 * v))
}

fn key(t: &Triple) -> usize {
    spread(t.a) + 2 * spread(t.b) + 3 * spread(t.c)
}

impl SemigraphoidClosure {
    pub fn new(n: usize) -> Result<Self> {
        if n > CLOSURE_LIMIT {
            return Err(Error::TooManyVertices {
                got: n,
                limit: CLOSURE_LIMIT,
            });
        }
        Ok(SemigraphoidClosure {
            n,
            present: vec![false; 1 << (2 * n)],
            count: 0,
        })
    }

    /// Number of stored statements, counting both orientations.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Trivial statements always hold.
    pub fn contains(&self, t: &Triple) -> bool {
        t.is_trivial() || self.present[key(t)]
    }

    /// Adds a statement and everything it newly implies.
    pub fn add(&mut self, t: Triple) {
        let mut queue = vec![t];
        while let Some(t) = queue.pop() {
            if t.is_trivial() || self.present[key(&t)] {
                continue;
            }
            self.present[key(&t)] = true;
            self.count += 1;
            queue.push(t.swapped());
            // decomposition and weak union, one vertex at a time
            if t.b.len() >= 2 {
                for v in t.b {
                    let vs = VertexSet::singleton(v);
                    queue.push(Triple { a: t.a, b: t.b - vs, c: t.c });
                    queue.push(Triple { a: t.a, b: t.b - vs, c: t.c | vs });
                }
            }
            // contraction with t as <A, B | C D>
            for d in t.c.nonempty_subsets() {
                let other = Triple { a: t.a, b: d, c: t.c - d };
                if self.present[key(&other)] {
                    queue.push(Triple { a: t.a, b: t.b | d, c: t.c - d });
                }
            }
            // contraction with t as <A, D | C>
            let free = VertexSet::full(self.n) - t.union();
            for b in free.nonempty_subsets() {
                let other = Triple { a: t.a, b, c: t.c | t.b };
                if self.present[key(&other)] {
                    queue.push(Triple { a: t.a, b: b | t.b, c: t.c });
                }
            }
        }
    }
}
