use super::closure::{SemigraphoidClosure, CLOSURE_LIMIT};
use super::olmp::{olmp_annotated, OlmpStep};
use super::{nie, nie_nonredundant};
use crate::error::Result;
use crate::graph::{Admg, Order};
use crate::heads_tails::n_imset;
use crate::separation::{triple_holds, Triple};

/// Outcome of one named check; empty `failures` means it passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub skipped: bool,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &String)> {
        self.checks
            .iter()
            .flat_map(|c| c.failures.iter().map(move |f| (c.name, f)))
    }
}

/// Runs the decomposition checks for one graph and order:
///
/// 1. `n = i − e` pointwise, for both the plain and the cancelling variant;
/// 2. the certificates evaluate to the Möbius transforms of `i` and `e`;
/// 3. every certificate triple, and every statement emitted by [`olmp`] for
///    any ancestral set, is m-separated in the graph;
/// 4. for every non-empty ancestral `A` the statement
///    `<b, A∖cl(b) | mb(b)>` (`b = max A`, closure within `G[A]`) is derivable
///    by the semigraphoid rules from the local statements marked
///    [`OlmpStep::Base`] in the run of `olmp` on `A`. Skipped above
///    [`CLOSURE_LIMIT`] vertices.
///
/// [`olmp`]: super::olmp
pub fn verify_decomposition(g: &Admg, order: &Order) -> Result<VerifyReport> {
    let n = g.n();
    let target = n_imset(g);
    let plain = nie(g, order)?;
    let lean = nie_nonredundant(g, order)?;

    let mut diff = CheckOutcome {
        name: "difference",
        skipped: false,
        failures: vec![],
    };
    for (label, r) in [("plain", &plain), ("nonredundant", &lean)] {
        let d = r.difference()?;
        for s in g.all().subsets() {
            if d.get(s) != target.get(s) {
                diff.failures.push(format!(
                    "{label}: i - e = {} but n = {} at {{{}}}",
                    d.get(s),
                    target.get(s),
                    g.fmt_set(s)
                ));
            }
        }
    }

    let mut cert = CheckOutcome {
        name: "certificates",
        skipped: false,
        failures: vec![],
    };
    for (label, r) in [("plain", &plain), ("nonredundant", &lean)] {
        for (which, imset, c) in [
            ("inclusion", &r.inclusion, &r.inclusion_cert),
            ("exclusion", &r.exclusion, &r.exclusion_cert),
        ] {
            if c.evaluate(n)? != imset.mobius_up()? {
                cert.failures
                    .push(format!("{label} {which} certificate does not match"));
            }
        }
    }

    let mut sep = CheckOutcome {
        name: "separation",
        skipped: false,
        failures: vec![],
    };
    let mut check_sep = |t: &Triple, what: &str| {
        if !triple_holds(g, t) {
            sep.failures
                .push(format!("{what} triple {} is not m-separated", t.fmt(g)));
        }
    };
    for r in [&plain, &lean] {
        for t in r.inclusion_cert.triples() {
            check_sep(t, "inclusion");
        }
        for t in r.exclusion_cert.triples() {
            check_sep(t, "exclusion");
        }
    }
    let ancestral: Vec<_> = g
        .ancestral_sets()
        .into_iter()
        .filter(|a| !a.is_empty())
        .collect();
    let mut runs = Vec::new();
    for &a in &ancestral {
        let steps = olmp_annotated(g, order, a)?;
        for (t, _) in &steps {
            check_sep(t, "olmp");
        }
        runs.push((a, steps));
    }

    let mut clos = CheckOutcome {
        name: "closure",
        skipped: n > CLOSURE_LIMIT,
        failures: vec![],
    };
    if !clos.skipped {
        for (a, steps) in &runs {
            let b = order.max_of(*a).unwrap();
            let m = g.co_vertex_in(*a, b);
            let goal = Triple {
                a: crate::vset::VertexSet::singleton(b),
                b: *a - m,
                c: m.without(b),
            };
            let mut cl = SemigraphoidClosure::new(n)?;
            for (t, step) in steps {
                if *step == OlmpStep::Base {
                    cl.add(*t);
                }
            }
            if !cl.contains(&goal) {
                clos.failures.push(format!(
                    "ancestral set {{{}}}: {} not derivable",
                    g.fmt_set(*a),
                    goal.fmt(g)
                ));
            }
        }
    }

    Ok(VerifyReport {
        checks: vec![diff, cert, sep, clos],
    })
}
