//! Markov equivalence classes of small directed MAGs, exhaustive BIC_MF
//! ranking and recovery experiments.
//!
//! Graphs on `p` labelled vertices are coded in base 4, one digit per vertex
//! pair in [`vertex_pairs`] order with the first pair most significant:
//! 0 none, 1 `i -> j`, 2 `j -> i`, 3 `i <-> j`. Classes are keyed by their
//! family of parameterizing sets, and the representative of a class is its
//! member with the smallest code.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{simulate_with, BicMfScorer, SampleMoments, ScoreResult};
use crate::graph::{graph_from_states, vertex_pairs, Admg, PairState};
use crate::heads_tails::ParamFamily;

/// Largest vertex count the catalog will enumerate.
pub const MAX_MEC_VERTICES: usize = 5;

const STATES: [PairState; 4] = [
    PairState::None,
    PairState::Forward,
    PairState::Backward,
    PairState::Bidirected,
];

fn check_p(p: usize) -> Result<()> {
    if p > MAX_MEC_VERTICES {
        return Err(Error::TooManyVertices {
            got: p,
            limit: MAX_MEC_VERTICES,
        });
    }
    Ok(())
}

fn code_count(p: usize) -> u32 {
    4u32.pow(vertex_pairs(p).len() as u32)
}

/// The graph with the given code, whether or not it is a MAG. `None` when it
/// has a directed cycle.
pub fn decode(p: usize, code: u32) -> Option<Admg> {
    let pairs = vertex_pairs(p).len();
    let states: Vec<PairState> = (0..pairs)
        .map(|k| STATES[((code >> (2 * (pairs - 1 - k))) & 3) as usize])
        .collect();
    graph_from_states(p, &states)
}

/// Inverse of [`decode`] for graphs with at most one edge per pair.
pub fn encode(g: &Admg) -> Result<u32> {
    check_p(g.n())?;
    let mut code = 0u32;
    for (i, j) in vertex_pairs(g.n()) {
        let d = match (g.has_directed(i, j), g.has_directed(j, i), g.has_bidirected(i, j)) {
            (false, false, false) => 0,
            (true, false, false) => 1,
            (false, true, false) => 2,
            (false, false, true) => 3,
            _ => {
                return Err(Error::Precondition(format!(
                    "more than one edge between {} and {}",
                    g.name(i),
                    g.name(j)
                )))
            }
        };
        code = code * 4 + d;
    }
    Ok(code)
}

/// Codes of all directed MAGs on `p` vertices, in increasing order.
pub fn directed_mag_codes(p: usize) -> Result<Vec<u32>> {
    check_p(p)?;
    Ok((0..code_count(p))
        .into_par_iter()
        .filter(|&c| decode(p, c).is_some_and(|g| g.is_directed_mag()))
        .collect())
}

/// All directed MAGs on `p` labelled vertices, in code order.
pub fn enumerate_directed_mags(p: usize) -> Result<impl Iterator<Item = Admg>> {
    check_p(p)?;
    Ok((0..code_count(p)).filter_map(move |c| decode(p, c).filter(Admg::is_directed_mag)))
}

/// Same parameterizing sets, hence the same independence model.
pub fn markov_equivalent(g1: &Admg, g2: &Admg) -> Result<bool> {
    if g1.names() != g2.names() {
        return Err(Error::Precondition("graphs have different vertices".into()));
    }
    Ok(ParamFamily::new(g1).key() == ParamFamily::new(g2).key())
}

#[derive(Clone, Debug)]
pub struct MecClass {
    /// Parameterizing-set membership table packed into words.
    pub key: Vec<u64>,
    pub representative: Admg,
    pub code: u32,
    pub members: usize,
}

/// Every Markov equivalence class of directed MAGs on `p` vertices.
#[derive(Clone, Debug)]
pub struct MecCatalog {
    pub p: usize,
    pub classes: Vec<MecClass>,
    /// Codes of every directed MAG, in increasing order.
    pub mag_codes: Vec<u32>,
    index: HashMap<Vec<u64>, usize>,
}

impl MecCatalog {
    pub fn build(p: usize) -> Result<Self> {
        let mag_codes = directed_mag_codes(p)?;
        let mut keyed: Vec<(Vec<u64>, u32)> = mag_codes
            .par_iter()
            .map(|&c| {
                let g = decode(p, c).expect("code was checked");
                (ParamFamily::new(&g).key(), c)
            })
            .collect();
        keyed.par_sort_unstable();
        let mut classes: Vec<MecClass> = Vec::new();
        for (key, code) in keyed {
            match classes.last_mut() {
                Some(c) if c.key == key => {
                    c.members += 1;
                    c.code = c.code.min(code);
                }
                _ => classes.push(MecClass {
                    key,
                    representative: Admg::empty(p)?,
                    code,
                    members: 1,
                }),
            }
        }
        // ids follow the representatives' codes
        classes.sort_by_key(|c| c.code);
        for c in &mut classes {
            c.representative = decode(p, c.code).expect("code was checked");
        }
        let index = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.key.clone(), i))
            .collect();
        Ok(MecCatalog {
            p,
            classes,
            mag_codes,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class id of any graph on the catalog's vertices.
    pub fn class_of(&self, g: &Admg) -> Option<usize> {
        if g.n() != self.p {
            return None;
        }
        self.index.get(&ParamFamily::new(g).key()).copied()
    }
}

pub fn build_mec_catalog(p: usize) -> Result<MecCatalog> {
    MecCatalog::build(p)
}

/// Scores of every class on one data set.
#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    /// Indexed by class id.
    pub scores: Vec<ScoreResult>,
    /// Class ids from best to worst.
    pub ranking: Vec<usize>,
    /// 1-based rank of each class id.
    pub rank: Vec<usize>,
    /// Groups of class ids whose scores agree to within rounding, each
    /// ordered by id as in the ranking.
    pub ties: Vec<Vec<usize>>,
}

impl RankReport {
    pub fn rank_of(&self, class: usize) -> usize {
        self.rank[class]
    }
}

/// Relative gap below which two scores count as tied.
pub const TIE_TOLERANCE: f64 = 1e-10;

/// Scorers for every class representative, built once and reused across
/// data sets.
#[derive(Clone, Debug)]
pub struct Ranker {
    scorers: Vec<BicMfScorer>,
}

impl Ranker {
    /// Each representative is scored under its own lowest-index-first
    /// consistent order.
    pub fn new(catalog: &MecCatalog) -> Result<Self> {
        let scorers = catalog
            .classes
            .par_iter()
            .map(|c| {
                let g = &c.representative;
                BicMfScorer::new(g, &g.consistent_order())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ranker { scorers })
    }

    pub fn rank(&self, m: &SampleMoments) -> Result<RankReport> {
        if let Some(s) = self.scorers.first() {
            if s.dag.n() != m.p() {
                return Err(Error::Precondition(format!(
                    "data has {} variables, catalog has {}",
                    m.p(),
                    s.dag.n()
                )));
            }
        }
        let scores = self
            .scorers
            .par_iter()
            .map(|s| s.score(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(rank_scores(scores))
    }
}

fn rank_scores(scores: Vec<ScoreResult>) -> RankReport {
    let mut ranking: Vec<usize> = (0..scores.len()).collect();
    ranking.sort_by(|&a, &b| scores[b].score.total_cmp(&scores[a].score).then(a.cmp(&b)));
    // near-equal neighbours form a tie group, which is put in id order
    let mut ties = Vec::new();
    let mut start = 0;
    for i in 1..=ranking.len() {
        let close = i < ranking.len() && {
            let (x, y) = (scores[ranking[i - 1]].score, scores[ranking[i]].score);
            (x - y).abs() <= TIE_TOLERANCE * x.abs().max(y.abs()).max(1.0)
        };
        if !close {
            if i - start > 1 {
                ranking[start..i].sort_unstable();
                ties.push(ranking[start..i].to_vec());
            }
            start = i;
        }
    }
    let mut rank = vec![0; scores.len()];
    for (pos, &c) in ranking.iter().enumerate() {
        rank[c] = pos + 1;
    }
    RankReport {
        scores,
        ranking,
        rank,
        ties,
    }
}

/// Largest minus smallest BIC_MF of `g` over its consistent orders. The
/// order enters through the dominating DAG, so this is zero at a Markov
/// covariance but usually not on finite samples.
pub fn order_spread(g: &Admg, m: &SampleMoments) -> Result<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for o in g.all_consistent_orders() {
        let s = crate::gaussian::bic_mf(g, &o, m)?.score;
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok(hi - lo)
}

pub fn rank_models(catalog: &MecCatalog, m: &SampleMoments) -> Result<RankReport> {
    Ranker::new(catalog)?.rank(m)
}

/// Where the data-generating graphs come from.
#[derive(Clone, Debug)]
pub enum Generator {
    Fixed(Admg),
    /// Uniform over directed MAGs on the catalog's vertices with an edge
    /// count in the range.
    RandomMags { min_edges: usize, max_edges: usize },
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub generator: Generator,
    pub ns: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepOutcome {
    pub n: usize,
    pub rep: usize,
    pub truth_class: usize,
    pub rank: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub reps: usize,
    pub top1: f64,
    pub mean_rank: f64,
    pub wall_seconds: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub outcomes: Vec<RepOutcome>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentResult {
    /// `(rank, count)` for ranks `1..=worst` observed at sample size `n`.
    pub fn histogram(&self, n: usize) -> Vec<(usize, usize)> {
        let ranks: Vec<usize> = self
            .outcomes
            .iter()
            .filter(|o| o.n == n)
            .map(|o| o.rank)
            .collect();
        let worst = ranks.iter().copied().max().unwrap_or(0);
        (1..=worst)
            .map(|r| (r, ranks.iter().filter(|&&x| x == r).count()))
            .collect()
    }
}

/// Random stream for one repetition at one sample size.
pub fn rep_rng(seed: u64, n_index: usize, rep: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((n_index as u64) << 32) | rep as u64);
    r
}

fn draw_graph<R: Rng>(catalog: &MecCatalog, pool: &[u32], gen: &Generator, rng: &mut R) -> Admg {
    match gen {
        Generator::Fixed(g) => g.clone(),
        Generator::RandomMags { .. } => {
            decode(catalog.p, pool[rng.gen_range(0..pool.len())]).expect("pool holds MAG codes")
        }
    }
}

/// Simulates, ranks and records the rank of the generating class for every
/// repetition and sample size.
pub fn recovery_experiment(
    catalog: &MecCatalog,
    ranker: &Ranker,
    cfg: &ExperimentConfig,
) -> Result<ExperimentResult> {
    let pool: Vec<u32> = match &cfg.generator {
        Generator::Fixed(g) => {
            if g.n() != catalog.p || !g.is_directed_mag() {
                return Err(Error::Precondition(format!(
                    "generator must be a directed MAG on {} vertices",
                    catalog.p
                )));
            }
            Vec::new()
        }
        Generator::RandomMags {
            min_edges,
            max_edges,
        } => {
            let pool: Vec<u32> = catalog
                .mag_codes
                .iter()
                .copied()
                .filter(|&c| {
                    let e = decode(catalog.p, c).expect("MAG code").edge_count();
                    (*min_edges..=*max_edges).contains(&e)
                })
                .collect();
            if pool.is_empty() {
                return Err(Error::Precondition("no MAG has an edge count in range".into()));
            }
            pool
        }
    };
    let mut outcomes = Vec::new();
    let mut summary = Vec::new();
    if cfg.reps == 0 {
        return Ok(ExperimentResult { outcomes, summary });
    }
    for (ni, &n) in cfg.ns.iter().enumerate() {
        let start = Instant::now();
        let rows = (0..cfg.reps)
            .into_par_iter()
            .map(|rep| {
                let mut rng = rep_rng(cfg.seed, ni, rep);
                let g = draw_graph(catalog, &pool, &cfg.generator, &mut rng);
                let truth_class = catalog
                    .class_of(&g)
                    .ok_or_else(|| Error::Precondition("generator is not in the catalog".into()))?;
                let sim = simulate_with(&g, n, &mut rng)?;
                let m = SampleMoments::from_data(&sim.data)?;
                let t = Instant::now();
                let report = ranker.rank(&m)?;
                Ok(RepOutcome {
                    n,
                    rep,
                    truth_class,
                    rank: report.rank_of(truth_class),
                    seconds: t.elapsed().as_secs_f64(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let reps = rows.len();
        let top1 = rows.iter().filter(|o| o.rank == 1).count() as f64 / reps as f64;
        let mean_rank = rows.iter().map(|o| o.rank as f64).sum::<f64>() / reps as f64;
        summary.push(SummaryRow {
            n,
            reps,
            top1,
            mean_rank,
            wall_seconds: start.elapsed().as_secs_f64(),
            seed: cfg.seed,
        });
        outcomes.extend(rows);
    }
    Ok(ExperimentResult { outcomes, summary })
}
