use super::*;
use crate::graph::tests::{small_admgs, strided_admgs};
use crate::heads_tails::n_imset;
use crate::named::*;
use crate::separation::triple_holds;

fn set(g: &Admg, s: &str) -> VertexSet {
    g.set_from_names(s).unwrap()
}

fn names(g: &Admg, sets: &[VertexSet]) -> Vec<String> {
    sets.iter().map(|&s| g.fmt_set(s)).collect()
}

fn cert(g: &Admg, c: &SemiElemCombination) -> Vec<String> {
    c.triples().map(|t| t.fmt(g)).collect()
}

#[test]
fn pairs_on_bridged_chains() {
    let g = bridged_chains();
    let o = bridged_chains_order();
    let c = g.index_of("c").unwrap();
    let p = pairs(&g, c).unwrap();
    assert_eq!(names(&g, &p.ns), ["abce", "acde"]);
    assert_eq!(names(&g, &p.ms), ["abc", "cde"]);

    let expect = [
        ("b", "abde", vec!["abde"], vec!["ab"]),
        ("d", "ade", vec!["ade"], vec!["de"]),
        ("a", "ae", vec!["ae"], vec!["a"]),
        ("e", "e", vec![], vec![]),
    ];
    for (v, dom, ns, ms) in expect {
        let dom = set(&g, dom);
        let fam = ParamFamily::new_in(&g, dom);
        let p = pairs_in(&g, &fam, dom, g.index_of(v).unwrap()).unwrap();
        assert_eq!(names(&g, &p.ns), ns, "{v}");
        assert_eq!(names(&g, &p.ms), ms, "{v}");
    }
    // the vertex must be barren in the domain
    assert!(pairs(&g, g.index_of("a").unwrap()).is_err());
    let r = nie(&g, &o).unwrap();
    let order_of_vertices: Vec<&str> = r.pairs.iter().map(|(v, _)| g.name(*v)).collect();
    assert_eq!(order_of_vertices, ["c", "b", "d", "a", "e"]);
}

#[test]
fn nie_on_bridged_chains() {
    let g = bridged_chains();
    let o = bridged_chains_order();
    let r = nie(&g, &o).unwrap();
    assert_eq!(
        cert(&g, &r.inclusion_cert),
        ["<c,e|ab>", "<c,a|de>", "<c,ae|>", "<b,de|a>", "<d,a|e>", "<a,e|>"]
    );
    assert_eq!(cert(&g, &r.exclusion_cert), ["<c,e|a>", "<c,a|e>"]);

    // the imsets are the sums of the printed set indicators
    let sum = |c: &SemiElemCombination| {
        let mut u = Imset::zero(5);
        for t in c.triples() {
            u.add_assign_checked(&Imset::delta_triple(5, t)).unwrap();
        }
        u
    };
    assert_eq!(r.inclusion, sum(&r.inclusion_cert));
    assert_eq!(r.exclusion, sum(&r.exclusion_cert));
    // expanded forms of the exclusion terms: ace twice, ce once, ac once
    let e = &r.exclusion;
    assert_eq!(e.get(set(&g, "ace")), 2);
    assert_eq!(e.get(set(&g, "ce")), 1);
    assert_eq!(e.get(set(&g, "ac")), 1);
    assert_eq!(e.support().count(), 3);
    // ace collects from three inclusion terms
    assert_eq!(r.inclusion.get(set(&g, "ace")), 3);
    assert_eq!(r.difference().unwrap(), n_imset(&g));

    assert_eq!(r.inclusion_cert.evaluate(5).unwrap(), r.inclusion.mobius_up().unwrap());
    assert_eq!(r.exclusion_cert.evaluate(5).unwrap(), r.exclusion.mobius_up().unwrap());
    for t in r.inclusion_cert.triples().chain(r.exclusion_cert.triples()) {
        assert!(triple_holds(&g, t), "{}", t.fmt(&g));
    }
}

#[test]
fn nonredundant_variant_cancels_pairs() {
    let g = bidirected_six_cycle();
    let o = g.consistent_order();
    let plain = nie(&g, &o).unwrap();
    let lean = nie_nonredundant(&g, &o).unwrap();
    assert_eq!(plain.difference().unwrap(), n_imset(&g));
    assert_eq!(lean.difference().unwrap(), n_imset(&g));
    assert!(lean.inclusion_cert.len() <= plain.inclusion_cert.len());
    assert!(lean.exclusion_cert.len() <= plain.exclusion_cert.len());
    // the six-cycle needs an adjustment term
    assert!(!plain.exclusion.is_zero());
}

#[test]
fn rejects_inconsistent_order() {
    let g = confounded_chain();
    let o = Order::from_names(&g, "d,c,b,a");
    assert!(o.is_err() || nie(&g, &o.unwrap()).is_err());
}

#[test]
fn olmp_goal_on_bridged_chains() {
    let g = bridged_chains();
    let o = bridged_chains_order();
    let steps = olmp_annotated(&g, &o, g.all()).unwrap();
    assert!(!steps.is_empty());
    let c = g.index_of("c").unwrap();
    let cl = g.markov_closure(c);
    let goal = Triple {
        a: VertexSet::singleton(c),
        b: g.all() - cl,
        c: cl.without(c),
    };
    let mut closure = SemigraphoidClosure::new(5).unwrap();
    for (t, s) in &steps {
        assert!(triple_holds(&g, t));
        if *s == OlmpStep::Base {
            closure.add(*t);
        }
    }
    assert!(closure.contains(&goal));
    assert!(olmp(&g, &o, set(&g, "bc")).is_err());
}

#[test]
fn verify_on_named_graphs() {
    let named = [
        confounded_chain(),
        crossed_confounders(),
        bridged_chains(),
        bidirected_five_chain(),
        bidirected_six_cycle(),
    ];
    for g in named {
        for o in g.all_consistent_orders().into_iter().take(4) {
            let rep = verify_decomposition(&g, &o).unwrap();
            let fails: Vec<_> = rep.failures().collect();
            assert!(rep.passed(), "{}: {fails:?}", g.edge_summary());
        }
    }
}

#[test]
fn decomposition_on_all_small_graphs() {
    for g in small_admgs(3) {
        for o in g.all_consistent_orders() {
            let rep = verify_decomposition(&g, &o).unwrap();
            assert!(rep.passed(), "{}", g.edge_summary());
        }
    }
}

#[test]
fn decomposition_on_sampled_larger_graphs() {
    for g in strided_admgs(5, 104_729).into_iter().chain(strided_admgs(6, 99_999_989)) {
        let o = g.consistent_order();
        let rep = verify_decomposition(&g, &o).unwrap();
        let fails: Vec<_> = rep.failures().collect();
        assert!(rep.passed(), "{}: {fails:?}", g.edge_summary());
    }
}

#[test]
fn olmp_examples() {
    let g = bridged_chains();
    let o = bridged_chains_order();
    let c = olmp(&g, &o, set(&g, "abde")).unwrap();
    assert!(cert(&g, &c).contains(&"<b,de|a>".to_string()));
    assert!(olmp(&g, &o, VertexSet::EMPTY).unwrap().is_empty());

    let dag = Admg::from_names(&["a", "b"], &[("a", "b")], &[]).unwrap();
    let c = olmp(&dag, &dag.consistent_order(), dag.all()).unwrap();
    assert!(c.triples().all(|t| t.is_trivial()));
}

#[test]
fn olmp_stays_sound_when_closure_leaves_the_set() {
    // the closure of d in G[pre(d)] picks up c, a descendant of the latent a
    let g = Admg::from_names(&["a", "b", "c", "d"], &[("a", "c"), ("c", "b")], &[("a", "d"), ("b", "d")])
        .unwrap();
    let o = Order::from_names(&g, "a,c,b,d").unwrap();
    for a in g.ancestral_sets() {
        for (t, _) in olmp_annotated(&g, &o, a).unwrap() {
            assert!(triple_holds(&g, &t), "{} in {}", t.fmt(&g), g.fmt_set(a));
        }
    }
    assert!(verify_decomposition(&g, &o).unwrap().passed());
}

#[test]
fn base_families_cover_constrained_sets() {
    for g in small_admgs(4) {
        let fam = ParamFamily::new(&g);
        for b in g.barren_subset(g.all()) {
            let p = pairs(&g, b).unwrap();
            for s in g.all().subsets().filter(|s| s.contains(b)) {
                let covered = p
                    .ns
                    .iter()
                    .zip(&p.ms)
                    .any(|(&n, &m)| s.is_subset(n) && !s.is_subset(m));
                assert_eq!(covered, !fam.contains(s), "{}", g.edge_summary());
            }
        }
    }
}

#[test]
fn difference_does_not_depend_on_order() {
    for g in small_admgs(4).into_iter().step_by(7) {
        let orders = g.all_consistent_orders();
        let first = nie(&g, &orders[0]).unwrap().difference().unwrap();
        for o in &orders[1..] {
            assert_eq!(nie(&g, o).unwrap().difference().unwrap(), first);
        }
    }
}

#[test]
fn nonredundant_lists_are_disjoint() {
    let complete = Admg::from_names(&["a", "b", "c"], &[("a", "b"), ("a", "c"), ("b", "c")], &[]).unwrap();
    let r = nie_nonredundant(&complete, &complete.consistent_order()).unwrap();
    assert!(r.inclusion.is_zero() && r.exclusion.is_zero());
    for g in small_admgs(4).into_iter().step_by(11) {
        let o = g.consistent_order();
        let r = nie_nonredundant(&g, &o).unwrap();
        for t in r.inclusion_cert.triples() {
            assert!(!r.exclusion_cert.triples().any(|u| u == t), "{}", g.edge_summary());
        }
        assert_eq!(r.difference().unwrap(), n_imset(&g));
    }
}
