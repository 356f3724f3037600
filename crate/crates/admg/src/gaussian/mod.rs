//! Gaussian linear models for directed MAGs, dominating-DAG fits and the
//! BIC_MF score.
//!
//! Log-likelihood sums are always computed from a fitted covariance and the
//! sample covariance through the trace identity, never row by row. The same
//! linear combination of marginal terms (a [`FactorPlan`]) can be evaluated
//! with per-point log densities instead, which is how the factorization is
//! checked pointwise.

use std::collections::BTreeMap;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Admg, Order};
use crate::heads_tails::ParamFamily;
use crate::inclusion_exclusion::nie;
use crate::vset::VertexSet;

/// How many times Ω is redrawn before giving up on positive definiteness.
pub const PD_ATTEMPTS: usize = 10_000;

/// Largest parameterizing set for which the plain head/tail sum is used.
pub const HEADS_BRANCH_MAX: usize = 5;

const LOG_2PI: f64 = 1.837_877_066_409_345_5;

/// Structural equations `X = B X + ε` with `ε ~ N(0, Ω)`. `b[(v, u)]` is the
/// coefficient of the edge `u -> v`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianModel {
    pub b: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    pub sigma: DMatrix<f64>,
}

fn signed_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let m = rng.gen_range(0.3..=0.7);
    if rng.gen::<bool>() {
        m
    } else {
        -m
    }
}

fn is_pd(m: &DMatrix<f64>) -> bool {
    Cholesky::new(m.clone()).is_some()
}

impl GaussianModel {
    /// Checks the zero pattern against `g`, then forms Σ.
    pub fn new(g: &Admg, b: DMatrix<f64>, omega: DMatrix<f64>) -> Result<Self> {
        let n = g.n();
        if b.shape() != (n, n) || omega.shape() != (n, n) {
            return Err(Error::Precondition(format!("matrices must be {n}x{n}")));
        }
        for v in 0..n {
            for u in 0..n {
                if b[(v, u)] != 0.0 && !g.has_directed(u, v) {
                    return Err(Error::Precondition(format!(
                        "coefficient for {} -> {} without an edge",
                        g.name(u),
                        g.name(v)
                    )));
                }
                if omega[(v, u)] != omega[(u, v)] {
                    return Err(Error::Precondition("Ω is not symmetric".into()));
                }
                if u != v && omega[(v, u)] != 0.0 && !g.has_bidirected(u, v) {
                    return Err(Error::Precondition(format!(
                        "error covariance for {} <-> {} without an edge",
                        g.name(u),
                        g.name(v)
                    )));
                }
            }
        }
        if !is_pd(&omega) {
            return Err(Error::Numerical("Ω is not positive definite".into()));
        }
        let sigma = implied_covariance(&b, &omega)?;
        Ok(GaussianModel { b, omega, sigma })
    }

    /// Random coefficients on the edges of any ADMG, drawn as in [`simulate`].
    /// The implied covariance is Markov to `g`.
    pub fn random<R: Rng + ?Sized>(g: &Admg, rng: &mut R) -> Result<Self> {
        let n = g.n();
        let mut omega = DMatrix::zeros(n, n);
        let mut found = false;
        for _ in 0..PD_ATTEMPTS {
            for v in 0..n {
                omega[(v, v)] = rng.gen_range(1.0..=3.0);
            }
            for (u, v) in g.bidirected_edges() {
                let w = signed_uniform(rng);
                omega[(u, v)] = w;
                omega[(v, u)] = w;
            }
            if is_pd(&omega) {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Numerical(format!(
                "no positive definite Ω after {PD_ATTEMPTS} draws"
            )));
        }
        let mut b = DMatrix::zeros(n, n);
        for (u, v) in g.directed_edges() {
            b[(v, u)] = signed_uniform(rng);
        }
        GaussianModel::new(g, b, omega)
    }

    /// `n` independent rows from `N(0, Σ)`.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<DMatrix<f64>> {
        let p = self.sigma.nrows();
        let l = Cholesky::new(self.sigma.clone())
            .ok_or_else(|| Error::Numerical("Σ is not positive definite".into()))?
            .l();
        let z = DMatrix::<f64>::from_fn(n, p, |_, _| rng.sample(StandardNormal));
        Ok(z * l.transpose())
    }
}

/// `(I − B)^{-1} Ω (I − B)^{-T}`.
pub fn implied_covariance(b: &DMatrix<f64>, omega: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = b.nrows();
    let inv = (DMatrix::identity(n, n) - b)
        .try_inverse()
        .ok_or_else(|| Error::Numerical("I − B is singular".into()))?;
    let s = &inv * omega * inv.transpose();
    Ok((&s + s.transpose()) * 0.5)
}

/// Data drawn from a random Gaussian model for a directed MAG.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub data: DMatrix<f64>,
    pub model: GaussianModel,
}

/// Draws a model for `g` and `n` rows from it, seeded deterministically.
pub fn simulate(g: &Admg, n: usize, seed: u64) -> Result<Simulation> {
    simulate_with(g, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn simulate_with<R: Rng + ?Sized>(g: &Admg, n: usize, rng: &mut R) -> Result<Simulation> {
    if !g.is_directed_mag() {
        return Err(Error::Precondition("simulation needs a directed MAG".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("sample size must be positive".into()));
    }
    let model = GaussianModel::random(g, rng)?;
    let data = model.sample(n, rng)?;
    Ok(Simulation { data, model })
}

/// Sample size, mean and covariance with divisor `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleMoments {
    pub n: usize,
    pub cov: DMatrix<f64>,
    pub mean: DVector<f64>,
}

impl SampleMoments {
    /// Rows are samples. The covariance is taken about the sample mean.
    pub fn from_data(data: &DMatrix<f64>) -> Result<Self> {
        let n = data.nrows();
        if n == 0 {
            return Err(Error::Precondition("no samples".into()));
        }
        let mean = data.row_mean().transpose();
        let mut centred = data.clone();
        for mut row in centred.row_iter_mut() {
            row -= mean.transpose();
        }
        let cov = centred.transpose() * &centred / n as f64;
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(SampleMoments { n, cov, mean })
    }

    /// Moments given directly as a covariance matrix.
    pub fn from_covariance(cov: DMatrix<f64>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("sample size must be positive".into()));
        }
        if !cov.is_square() {
            return Err(Error::Precondition("covariance must be square".into()));
        }
        let p = cov.nrows();
        let scale = cov.amax().max(1.0);
        for i in 0..p {
            for j in 0..i {
                if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-9 * scale {
                    return Err(Error::Precondition("covariance is not symmetric".into()));
                }
            }
        }
        let cov = (&cov + cov.transpose()) * 0.5;
        if p > 0 && cov.clone().symmetric_eigenvalues().min() < -1e-9 * scale {
            return Err(Error::Precondition(
                "covariance is not positive semi-definite".into(),
            ));
        }
        Ok(SampleMoments {
            n,
            cov,
            mean: DVector::zeros(p),
        })
    }

    pub fn p(&self) -> usize {
        self.cov.nrows()
    }
}

/// The DAG with `pa(b)` the Markov boundary of `b` in `G[pre(b)]`.
pub fn dominating_dag(g: &Admg, order: &Order) -> Result<Admg> {
    if !order.is_consistent_with(g) {
        return Err(Error::InvalidOrder("not consistent with the graph".into()));
    }
    let mut edges = Vec::new();
    for b in 0..g.n() {
        for a in g.markov_boundary_in(order.preceding(b), b) {
            edges.push((a, b));
        }
    }
    Admg::new(g.names(), &edges, &[])
}

fn block(m: &DMatrix<f64>, s: VertexSet) -> DMatrix<f64> {
    let idx: Vec<usize> = s.iter().collect();
    m.select_rows(&idx).select_columns(&idx)
}

fn cholesky_of(m: &DMatrix<f64>, s: VertexSet, g: Option<&Admg>) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(block(m, s)).ok_or_else(|| {
        let name = match g {
            Some(g) => g.fmt_set(s),
            None => format!("{:?}", s.iter().collect::<Vec<_>>()),
        };
        Error::Numerical(format!("covariance block on {{{name}}} is not positive definite"))
    })
}

/// Least-squares fit of a Gaussian DAG.
#[derive(Clone, Debug, PartialEq)]
pub struct DagFit {
    /// `coef[(b, a)]` regresses `b` on its parent `a`.
    pub coef: DMatrix<f64>,
    pub resid_var: DVector<f64>,
    pub sigma: DMatrix<f64>,
}

/// Regresses every vertex on its parents using the sample covariance.
pub fn dag_fit(d: &Admg, m: &SampleMoments) -> Result<DagFit> {
    if !d.is_dag() {
        return Err(Error::Precondition("graph has bidirected edges".into()));
    }
    let p = d.n();
    if m.p() != p {
        return Err(Error::Precondition(format!(
            "moments have {} variables, graph has {p}",
            m.p()
        )));
    }
    let s = &m.cov;
    let mut coef = DMatrix::zeros(p, p);
    let mut resid_var = DVector::zeros(p);
    for b in 0..p {
        let pa = d.pa_of(b);
        let fam = pa.with(b);
        cholesky_of(s, fam, Some(d))?;
        if pa.is_empty() {
            resid_var[b] = s[(b, b)];
            continue;
        }
        let idx: Vec<usize> = pa.iter().collect();
        let spp = block(s, pa);
        let spb = DVector::from_iterator(idx.len(), idx.iter().map(|&a| s[(a, b)]));
        let beta = Cholesky::new(spp)
            .ok_or_else(|| Error::Numerical(format!("parents of {} are collinear", d.name(b))))?
            .solve(&spb);
        for (k, &a) in idx.iter().enumerate() {
            coef[(b, a)] = beta[k];
        }
        let v = s[(b, b)] - spb.dot(&beta);
        if v <= 0.0 {
            return Err(Error::Numerical(format!(
                "no residual variance left for {}",
                d.name(b)
            )));
        }
        resid_var[b] = v;
    }
    let sigma = implied_covariance(&coef, &DMatrix::from_diagonal(&resid_var))?;
    Ok(DagFit {
        coef,
        resid_var,
        sigma,
    })
}

/// Implied covariance of the least-squares DAG fit.
pub fn dag_mle_sigma(d: &Admg, m: &SampleMoments) -> Result<DMatrix<f64>> {
    Ok(dag_fit(d, m)?.sigma)
}

/// `Σ_i log f_S(x^i)` under `N(0, Σ̂)` from the sample covariance:
/// `−(n/2)[|S| log 2π + log det Σ̂_S + tr(Σ̂_S^{-1} S_S)]`.
pub fn gaussian_marginal_loglik_sum(
    s: VertexSet,
    sigma_hat: &DMatrix<f64>,
    m: &SampleMoments,
) -> Result<f64> {
    if s.is_empty() {
        return Ok(0.0);
    }
    let chol = cholesky_of(sigma_hat, s, None)?;
    let logdet = 2.0 * chol.l().diagonal().map(f64::ln).sum();
    let trace = chol.solve(&block(&m.cov, s)).trace();
    Ok(-(m.n as f64) / 2.0 * (s.len() as f64 * LOG_2PI + logdet + trace))
}

/// `log f_S(x_S)` for a single point under `N(0, Σ)`; `x` has one entry per
/// vertex.
pub fn gaussian_log_density(s: VertexSet, sigma: &DMatrix<f64>, x: &[f64]) -> Result<f64> {
    if s.is_empty() {
        return Ok(0.0);
    }
    let chol = cholesky_of(sigma, s, None)?;
    let xs = DVector::from_iterator(s.len(), s.iter().map(|v| x[v]));
    let logdet = 2.0 * chol.l().diagonal().map(f64::ln).sum();
    let quad = xs.dot(&chol.solve(&xs));
    Ok(-0.5 * (s.len() as f64 * LOG_2PI + logdet + quad))
}

/// Which form of the factorization a plan uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// Sum over heads of `φ_{H|T}`.
    Heads,
    /// Dominating-DAG conditionals minus the inclusion-imset correction.
    Adjusted,
}

/// An integer combination `Σ c(S) h(S)` of marginal log densities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPlan {
    pub branch: Branch,
    terms: Vec<(VertexSet, i64)>,
}

struct Acc(BTreeMap<u32, i64>);

impl Acc {
    fn add(&mut self, s: VertexSet, k: i64) {
        if !s.is_empty() {
            *self.0.entry(s.bits()).or_insert(0) += k;
        }
    }

    /// Adds `k·φ_S`, i.e. `k Σ_{T⊆S} (−1)^{|S∖T|} h(T)`.
    fn add_phi(&mut self, s: VertexSet, k: i64) {
        for t in s.subsets() {
            let sign = if (s.len() - t.len()).is_multiple_of(2) { 1 } else { -1 };
            self.add(t, sign * k);
        }
    }

    fn finish(self, branch: Branch) -> FactorPlan {
        let terms = self
            .0
            .into_iter()
            .filter(|&(_, k)| k != 0)
            .map(|(s, k)| (VertexSet::from_bits(s), k))
            .collect();
        FactorPlan { branch, terms }
    }
}

impl FactorPlan {
    /// `Σ_H φ_{H|T}` with `φ_{H|T} = Σ_{S⊆H} (−1)^{|H∖S|} h(S ∪ T)`.
    pub fn heads(g: &Admg) -> Self {
        FactorPlan::heads_of(&ParamFamily::new(g))
    }

    fn heads_of(fam: &ParamFamily) -> Self {
        let mut acc = Acc(BTreeMap::new());
        for ht in fam.heads() {
            for s in ht.head.subsets() {
                let sign = if (ht.head.len() - s.len()) % 2 == 0 { 1 } else { -1 };
                acc.add(s | ht.tail, sign);
            }
        }
        acc.finish(Branch::Heads)
    }

    /// `Σ_b [h(b ∪ pa_D(b)) − h(pa_D(b)) − Σ_{S⊆pa_D(b)} i(bS) φ_{bS}]` with
    /// `D` the dominating DAG and `i` the inclusion imset for `order`.
    pub fn adjusted(g: &Admg, order: &Order) -> Result<Self> {
        let d = dominating_dag(g, order)?;
        let inc = nie(g, order)?.inclusion;
        let mut acc = Acc(BTreeMap::new());
        for b in 0..g.n() {
            let pa = d.pa_of(b);
            acc.add(pa.with(b), 1);
            acc.add(pa, -1);
        }
        for (u, k) in inc.support() {
            let Some(b) = order.max_of(u) else { continue };
            if u.without(b).is_subset(d.pa_of(b)) {
                acc.add_phi(u, -k);
            }
        }
        Ok(acc.finish(Branch::Adjusted))
    }

    /// The heads form when every parameterizing set has at most
    /// [`HEADS_BRANCH_MAX`] elements, otherwise the adjusted form.
    pub fn for_graph(g: &Admg, order: &Order) -> Result<Self> {
        let fam = ParamFamily::new(g);
        if fam.max_size() <= HEADS_BRANCH_MAX {
            Ok(FactorPlan::heads_of(&fam))
        } else {
            FactorPlan::adjusted(g, order)
        }
    }

    /// Non-zero coefficients in increasing bitmask order.
    pub fn terms(&self) -> &[(VertexSet, i64)] {
        &self.terms
    }

    /// Evaluates the combination with `h` giving the marginal term for a set.
    pub fn evaluate<F: FnMut(VertexSet) -> Result<f64>>(&self, mut h: F) -> Result<f64> {
        let mut total = 0.0;
        for &(s, k) in &self.terms {
            total += k as f64 * h(s)?;
        }
        Ok(total)
    }
}

/// The factorized log-likelihood of `g` at the fitted covariance.
pub fn approx_loglik(
    g: &Admg,
    order: &Order,
    sigma_hat: &DMatrix<f64>,
    m: &SampleMoments,
) -> Result<f64> {
    FactorPlan::for_graph(g, order)?.evaluate(|s| gaussian_marginal_loglik_sum(s, sigma_hat, m))
}

/// `|V| + #{M : |M| ∈ {1, 2}}` over the parameterizing sets.
pub fn gaussian_dimension(g: &Admg) -> usize {
    let fam = ParamFamily::new(g);
    g.n() + fam.sets().filter(|s| s.len() <= 2).count()
}

/// `Σ_H |X_T| Π_{h∈H} (|X_h| − 1)` over heads `H` with tails `T`.
pub fn multinomial_dimension(g: &Admg, cards: &[u64]) -> Result<u64> {
    if cards.len() != g.n() {
        return Err(Error::Precondition(format!(
            "{} category counts for {} vertices",
            cards.len(),
            g.n()
        )));
    }
    if let Some(v) = cards.iter().position(|&c| c < 2) {
        return Err(Error::Precondition(format!(
            "`{}` needs at least two categories",
            g.name(v)
        )));
    }
    let prod = |s: VertexSet, f: &dyn Fn(u64) -> u64| {
        s.iter()
            .try_fold(1u64, |acc, v| acc.checked_mul(f(cards[v])))
            .ok_or(Error::Overflow("multinomial dimension"))
    };
    let mut total = 0u64;
    for ht in ParamFamily::new(g).heads() {
        let k = prod(ht.tail, &|c| c)?
            .checked_mul(prod(ht.head, &|c| c - 1)?)
            .ok_or(Error::Overflow("multinomial dimension"))?;
        total = total
            .checked_add(k)
            .ok_or(Error::Overflow("multinomial dimension"))?;
    }
    Ok(total)
}

/// A penalized log-likelihood.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScoreResult {
    pub score: f64,
    pub loglik: f64,
    pub dimension: usize,
    pub penalty: f64,
}

impl ScoreResult {
    pub fn new(loglik: f64, dimension: usize, n: usize) -> Self {
        let penalty = dimension as f64 / 2.0 * (n as f64).ln();
        ScoreResult {
            score: loglik - penalty,
            loglik,
            dimension,
            penalty,
        }
    }
}

/// Everything about a graph that BIC_MF needs apart from the data, so that
/// one graph can be scored against many data sets cheaply.
#[derive(Clone, Debug)]
pub struct BicMfScorer {
    pub dag: Admg,
    pub plan: FactorPlan,
    pub dimension: usize,
}

impl BicMfScorer {
    pub fn new(g: &Admg, order: &Order) -> Result<Self> {
        Ok(BicMfScorer {
            dag: dominating_dag(g, order)?,
            plan: FactorPlan::for_graph(g, order)?,
            dimension: gaussian_dimension(g),
        })
    }

    pub fn score(&self, m: &SampleMoments) -> Result<ScoreResult> {
        let sigma = dag_mle_sigma(&self.dag, m)?;
        let ll = self
            .plan
            .evaluate(|s| gaussian_marginal_loglik_sum(s, &sigma, m))?;
        Ok(ScoreResult::new(ll, self.dimension, m.n))
    }
}

/// BIC_MF: the factorized log-likelihood at the dominating-DAG fit minus
/// `dimension/2 · log n`.
pub fn bic_mf(g: &Admg, order: &Order, m: &SampleMoments) -> Result<ScoreResult> {
    BicMfScorer::new(g, order)?.score(m)
}

/// Ordinary BIC of a Gaussian DAG from its residual variances.
pub fn dag_bic(d: &Admg, m: &SampleMoments) -> Result<ScoreResult> {
    let fit = dag_fit(d, m)?;
    let n = m.n as f64;
    let ll: f64 = fit
        .resid_var
        .iter()
        .map(|&v| -n / 2.0 * (LOG_2PI + v.ln() + 1.0))
        .sum();
    let dim = 2 * d.n() + d.directed_edges().len();
    Ok(ScoreResult::new(ll, dim, m.n))
}
