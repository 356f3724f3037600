//! Small graphs with well understood structure, used in tests and docs.

use crate::graph::{bidirected_chain, bidirected_cycle, Admg, Order};

/// `a -> b -> c -> d` with `b <-> d`: the latent projection of a DAG with a
/// hidden common cause of `b` and `d`.
pub fn confounded_chain() -> Admg {
    Admg::from_names(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("b", "c"), ("c", "d")],
        &[("b", "d")],
    )
    .unwrap()
}

/// `a -> c`, `b -> d`, `a <-> d`, `b <-> c`.
pub fn crossed_confounders() -> Admg {
    Admg::from_names(
        &["a", "b", "c", "d"],
        &[("a", "c"), ("b", "d")],
        &[("a", "d"), ("b", "c")],
    )
    .unwrap()
}

/// `a -> b`, `e -> d` and the bidirected path `b <-> c <-> d`.
pub fn bridged_chains() -> Admg {
    Admg::from_names(
        &["a", "b", "c", "d", "e"],
        &[("a", "b"), ("e", "d")],
        &[("b", "c"), ("c", "d")],
    )
    .unwrap()
}

/// The order `e, a, d, b, c` for [`bridged_chains`].
pub fn bridged_chains_order() -> Order {
    Order::from_names(&bridged_chains(), "e,a,d,b,c").unwrap()
}

/// `a <-> b <-> c <-> d <-> e`.
pub fn bidirected_five_chain() -> Admg {
    bidirected_chain(5).unwrap()
}

/// Bidirected cycle on `a..f`.
pub fn bidirected_six_cycle() -> Admg {
    bidirected_cycle(6).unwrap()
}
