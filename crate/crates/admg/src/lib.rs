//! m-connecting imsets for acyclic directed mixed graphs.
//!
//! * [`graph`]: the [`Admg`] type, vertex-set functions, orders, formats.
//! * [`separation`]: m-separation and independence models.
//! * [`imset`]: imsets and the zeta/Möbius transforms on the subset lattice.
//! * [`heads_tails`]: heads, tails, parameterizing sets, m-connecting imsets.
//! * [`inclusion_exclusion`]: the decomposition `n = i − e` and its checks.
//! * [`gaussian`]: simulation, dominating-DAG fits and the BIC_MF score.
//! * [`mec`]: Markov equivalence classes of directed MAGs and ranking.

pub mod error;
pub mod gaussian;
pub mod graph;
pub mod heads_tails;
pub mod imset;
pub mod inclusion_exclusion;
pub mod mec;
pub mod named;
pub mod separation;
pub mod vset;

pub use error::{Error, Result};
pub use graph::{Admg, Order};
pub use imset::{Imset, SemiElemCombination};
pub use separation::Triple;
pub use vset::VertexSet;
