use super::*;
use proptest::prelude::*;

fn vs(bits: u32) -> VertexSet {
    VertexSet::from_bits(bits)
}

fn naive_zeta_down(u: &Imset) -> Vec<i64> {
    let full = VertexSet::full(u.n());
    full.subsets()
        .map(|a| a.subsets().map(|b| u.get(b)).sum())
        .collect()
}

fn naive_zeta_up(u: &Imset) -> Vec<i64> {
    let full = VertexSet::full(u.n());
    full.subsets()
        .map(|a| (full - a).subsets().map(|b| u.get(a | b)).sum())
        .collect()
}

fn naive_mobius_up(u: &Imset) -> Vec<i64> {
    let full = VertexSet::full(u.n());
    full.subsets()
        .map(|a| {
            (full - a)
                .subsets()
                .map(|b| if b.len() % 2 == 0 { u.get(a | b) } else { -u.get(a | b) })
                .sum()
        })
        .collect()
}

#[test]
fn delta_triple_example() {
    // <a, b | c> on {a, b, c}: sets meeting both a and b
    let t = Triple::new(vs(1), vs(2), vs(4)).unwrap();
    let d = Imset::delta_triple(3, &t);
    let sup: Vec<u32> = d.support().map(|(s, _)| s.bits()).collect();
    assert_eq!(sup, vec![3, 7]);
    assert_eq!(d.mobius_up().unwrap(), Imset::semi_elementary(3, &t));
}

#[test]
fn semi_elementary_example() {
    let t = Triple::new(vs(0b001), vs(0b110), VertexSet::EMPTY).unwrap();
    let u = Imset::semi_elementary(3, &t);
    assert_eq!(u.get(vs(7)), 1);
    assert_eq!(u.get(VertexSet::EMPTY), 1);
    assert_eq!(u.get(vs(1)), -1);
    assert_eq!(u.get(vs(6)), -1);
    assert_eq!(u.values().iter().sum::<i64>(), 0);
    let empty_side = Triple::new(vs(1), VertexSet::EMPTY, vs(2)).unwrap();
    assert!(Imset::semi_elementary(3, &empty_side).is_zero());
    assert!(Imset::elementary(3, 0, 0, VertexSet::EMPTY).is_err());
}

#[test]
fn expansion_sums_to_semi_elementary() {
    let t = Triple::new(vs(0b0011), vs(0b1100), vs(0b10000)).unwrap();
    let parts = elementary_expansion(&t);
    assert_eq!(parts.len(), 4);
    let mut c = SemiElemCombination::new();
    for p in &parts {
        assert_eq!(p.a.len(), 1);
        assert_eq!(p.b.len(), 1);
        c.push(*p);
    }
    assert_eq!(c.evaluate(5).unwrap(), Imset::semi_elementary(5, &t));
    let mut one = SemiElemCombination::new();
    one.push(t);
    assert_eq!(one.to_elementary().evaluate(5).unwrap(), Imset::semi_elementary(5, &t));
}

#[test]
fn rational_coefficients() {
    assert!(Coef::new(0, 1).is_err());
    assert!(Coef::new(1, 0).is_err());
    assert_eq!(Coef::new(4, 6).unwrap(), Coef::new(2, 3).unwrap());
    assert_eq!(Coef::new(6, 3).unwrap().to_string(), "2");
    assert_eq!(Coef::new(1, 2).unwrap().to_string(), "1/2");
    let t = Triple::new(vs(1), vs(2), VertexSet::EMPTY).unwrap();
    let mut c = SemiElemCombination::new();
    c.push_with(t, Coef::new(1, 2).unwrap());
    assert!(c.evaluate(2).is_err());
    c.push_with(t, Coef::new(1, 2).unwrap());
    assert_eq!(c.evaluate(2).unwrap(), Imset::semi_elementary(2, &t));
    assert!(is_certified_structural(&c, &Imset::semi_elementary(2, &t)));
    assert!(!is_certified_structural(&c, &Imset::zero(2)));
}

#[test]
fn overflow_is_reported() {
    let mut u = Imset::zero(2);
    u.set(VertexSet::EMPTY, i64::MAX);
    u.set(vs(1), 1);
    assert!(matches!(u.zeta_up(), Err(Error::Overflow(_))));
    assert!(u.checked_add(&u).is_err());
    assert!(u.checked_scale(2).is_err());
    assert!(Imset::zero(2).checked_add(&Imset::zero(3)).is_err());
}

#[test]
fn pairing_with_log_density() {
    // independent uniform-ish factors: log f_S = Σ_{s∈S} h(s) makes
    // every semi-elementary imset pair to zero
    let t = Triple::new(vs(0b011), vs(0b100), vs(0b1000)).unwrap();
    let u = Imset::semi_elementary(4, &t);
    let h = [0.3, -1.2, 2.5, 0.7];
    let v = imset_factor_check(&u, |s| s.iter().map(|i| h[i]).sum());
    assert!(v.abs() < 1e-12);
}

fn arb_imset(max_n: usize) -> impl Strategy<Value = Imset> {
    (0..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-50i64..50, 1 << n).prop_map(move |v| Imset::from_values(n, v).unwrap())
    })
}

proptest! {
    #[test]
    fn transforms_invert(u in arb_imset(6)) {
        prop_assert_eq!(&u.zeta_down().unwrap().mobius_down().unwrap(), &u);
        prop_assert_eq!(&u.mobius_down().unwrap().zeta_down().unwrap(), &u);
        prop_assert_eq!(&u.zeta_up().unwrap().mobius_up().unwrap(), &u);
        prop_assert_eq!(&u.mobius_up().unwrap().zeta_up().unwrap(), &u);
    }

    #[test]
    fn transforms_match_definitions(u in arb_imset(5)) {
        prop_assert_eq!(u.zeta_down().unwrap().values().to_vec(), naive_zeta_down(&u));
        prop_assert_eq!(u.zeta_up().unwrap().values().to_vec(), naive_zeta_up(&u));
        prop_assert_eq!(u.mobius_up().unwrap().values().to_vec(), naive_mobius_up(&u));
    }

    #[test]
    fn mobius_up_of_triple_indicator(bits in prop::collection::vec(0u8..4, 6)) {
        let n = bits.len();
        let mut a = VertexSet::EMPTY;
        let mut b = VertexSet::EMPTY;
        let mut c = VertexSet::EMPTY;
        for (i, &k) in bits.iter().enumerate() {
            match k {
                1 => a = a.with(i),
                2 => b = b.with(i),
                3 => c = c.with(i),
                _ => {}
            }
        }
        let t = Triple::new(a, b, c).unwrap();
        prop_assert_eq!(
            Imset::delta_triple(n, &t).mobius_up().unwrap(),
            Imset::semi_elementary(n, &t)
        );
    }

    #[test]
    fn semi_elementary_is_degree_zero(bits in prop::collection::vec(0u8..4, 5)) {
        let n = bits.len();
        let pick = |k| bits.iter().enumerate().filter(|(_, &x)| x == k).fold(VertexSet::EMPTY, |acc, (i, _)| acc.with(i));
        let t = Triple::new(pick(1), pick(2), pick(3)).unwrap();
        let u = Imset::semi_elementary(n, &t);
        // pairs to zero with every modular function
        for v in 0..n {
            prop_assert_eq!(u.pair_with(|s| if s.contains(v) { 1.0 } else { 0.0 }), 0.0);
        }
        prop_assert_eq!(u.pair_with(|_| 1.0), 0.0);
    }
}
