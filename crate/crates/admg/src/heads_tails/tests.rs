use super::*;
use crate::graph::tests::{small_admgs, strided_admgs};
use crate::graph::{all_admgs, PairState};
use crate::named::*;
use crate::separation::independence_model;
use std::collections::HashMap;

fn set(g: &Admg, s: &str) -> VertexSet {
    g.set_from_names(s).unwrap()
}

fn table(g: &Admg) -> Vec<(String, String)> {
    ParamFamily::new(g)
        .heads()
        .iter()
        .map(|ht| (g.fmt_set(ht.head), g.fmt_set(ht.tail)))
        .collect()
}

fn owned(rows: &[(&str, &str)]) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = rows
        .iter()
        .map(|(h, t)| (h.to_string(), t.to_string()))
        .collect();
    v.sort();
    v
}

#[test]
fn confounded_chain_heads() {
    let g = confounded_chain();
    let mut t = table(&g);
    t.sort();
    assert_eq!(t, owned(&[("a", ""), ("b", "a"), ("c", "b"), ("d", "abc")]));
    assert_eq!(g.fmt_family(&richardson_partition(&g, g.all())), "{{d},{c},{b},{a}}");
}

#[test]
fn crossed_confounders_heads() {
    let g = crossed_confounders();
    let mut t = table(&g);
    t.sort();
    assert_eq!(
        t,
        owned(&[("a", ""), ("b", ""), ("c", "a"), ("d", "b"), ("ad", "b"), ("bc", "a")])
    );
    assert_eq!(g.fmt_family(&richardson_partition(&g, g.all())), "{{a,d},{b,c}}");
    assert_eq!(g.fmt_family(&richardson_partition(&g, set(&g, "ab"))), "{{a},{b}}");
    let f = head_factorization(&g, g.all()).unwrap();
    assert_eq!(f[0].tail, set(&g, "b"));
    assert!(head_factorization(&g, set(&g, "c")).is_err());
}

#[test]
fn tail_requires_head() {
    let g = crossed_confounders();
    assert_eq!(tail(&g, set(&g, "ad")).unwrap(), set(&g, "b"));
    assert!(tail(&g, set(&g, "ab")).is_err());
    assert!(tail(&g, VertexSet::EMPTY).is_err());
    assert!(is_head(&g, set(&g, "bc")));
    assert!(!is_head(&g, set(&g, "cd")));
}

#[test]
fn bidirected_cycle_constrained_sizes() {
    let g = bidirected_six_cycle();
    let n = n_imset(&g);
    let mut by_size = [0i64; 7];
    for (s, v) in n.support() {
        by_size[s.len()] += v;
    }
    let printed: Vec<i64> = (1..=6).rev().map(|k| by_size[k]).collect();
    assert_eq!(printed, vec![0, 0, 9, 14, 9, 0]);
}

#[test]
fn imsets_complement_each_other() {
    let g = bridged_chains();
    let m = m_imset(&g);
    let n = n_imset(&g);
    for s in g.all().subsets() {
        assert_eq!(m.get(s) + n.get(s), 1);
    }
    assert_eq!(constrained_sets(&g).len() as i64, n.values().iter().sum::<i64>());
    // head {b,c,d} with tail {a,e}
    assert_eq!(ParamFamily::new(&g).max_size(), 5);
}

#[test]
fn sweep_and_district_agree() {
    for g in small_admgs(4) {
        for dom in g.all().subsets() {
            assert_eq!(heads_by_sweep(&g, dom), heads_by_district(&g, dom), "{}", g.edge_summary());
        }
    }
    for g in strided_admgs(5, 9973).into_iter().chain(strided_admgs(6, 1_000_003)) {
        assert_eq!(heads_by_sweep(&g, g.all()), heads_by_district(&g, g.all()));
    }
}

#[test]
fn heads_match_separation_oracle() {
    for g in small_admgs(4) {
        let fam = ParamFamily::new(&g);
        assert_eq!(fam.m_imset(), m_imset_from_separation(&g), "{}", g.edge_summary());
        for s in g.all().subsets() {
            assert_eq!(s.is_empty() || fam.contains(s), parameterizing_by_closure(&g, s));
        }
    }
}

#[test]
fn dag_imset_is_characteristic() {
    let states = [PairState::None, PairState::Forward, PairState::Backward];
    for n in 1..=5 {
        for g in all_admgs(n, &states).into_iter().step_by(if n == 5 { 13 } else { 1 }) {
            assert_eq!(m_imset(&g), characteristic_imset(&g).unwrap());
        }
    }
    assert!(characteristic_imset(&confounded_chain()).is_err());
}

#[test]
fn family_key_matches_independence_model() {
    for n in 2..=3 {
        let gs = all_admgs(n, &PairState::ALL);
        let mut by_model: HashMap<_, Vec<u64>> = HashMap::new();
        let mut by_key: HashMap<Vec<u64>, _> = HashMap::new();
        for g in &gs {
            let m = independence_model(g).unwrap();
            let k = ParamFamily::new(g).key();
            if let Some(prev) = by_model.insert(m.clone(), k.clone()) {
                assert_eq!(prev, k, "{}", g.edge_summary());
            }
            if let Some(prev) = by_key.insert(k, m.clone()) {
                assert_eq!(prev, m, "{}", g.edge_summary());
            }
        }
    }
}

#[test]
fn partitions_cover_ancestral_sets() {
    for g in small_admgs(4) {
        let hs = heads(&g);
        for a in g.ancestral_sets() {
            let p = richardson_partition(&g, a);
            let mut union = VertexSet::EMPTY;
            for h in &p {
                assert!(hs.contains(h));
                assert!(h.is_disjoint(union));
                union |= *h;
            }
            assert_eq!(union, a, "{}", g.edge_summary());
            // the head-tail sets of the partition are parameterizing within A
            let fam = ParamFamily::new_in(&g, a);
            for ht in head_factorization(&g, a).unwrap() {
                assert!(fam.contains(ht.head | ht.tail));
            }
        }
    }
}

#[test]
fn restricted_family_is_family_of_subgraph() {
    for g in small_admgs(4) {
        for a in g.ancestral_sets() {
            let sub = ParamFamily::new_in(&g, a);
            let whole = ParamFamily::new(&g);
            for s in a.nonempty_subsets() {
                assert_eq!(sub.contains(s), whole.contains(s));
            }
        }
    }
}
