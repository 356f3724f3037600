//! `admg`: command line access to m-separation, imsets, the
//! inclusion-exclusion decomposition and BIC_MF scoring.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use admg::gaussian::{simulate, BicMfScorer, SampleMoments};
use admg::graph::{default_names, ParsedGraph};
use admg::heads_tails::{characteristic_imset, m_imset, n_imset, ParamFamily};
use admg::inclusion_exclusion::{nie, nie_nonredundant, verify_decomposition};
use admg::mec::{
    build_mec_catalog, recovery_experiment, ExperimentConfig, Generator, MecCatalog, Ranker,
};
use admg::separation::m_separated;
use admg::{Admg, Error, Imset, Order, Result, SemiElemCombination};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use io::{fmt_f64, graph_to_json, imset_csv, read_graph, read_table, Csv, Output};

#[derive(Parser)]
#[command(name = "admg", version, about = "m-connecting imsets and BIC_MF for mixed graphs")]
struct Cli {
    /// Worker threads for ranking and experiments (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output files into this directory instead of printing.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether A and B are m-separated given C.
    Msep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "")]
        c: String,
    },
    /// Heads, tails and parameterizing sets.
    Params {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print an imset of the graph as `subset,value` rows.
    Imset {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = ImsetKind::M)]
        kind: ImsetKind,
        #[arg(long, value_enum, default_value_t = Transform::None)]
        transform: Transform,
        /// Order for the inclusion and exclusion imsets.
        #[arg(long)]
        order: Option<String>,
        /// Include zero entries.
        #[arg(long)]
        all: bool,
    },
    /// Inclusion and exclusion imsets with their certificates.
    Nie {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        nonredundant: bool,
    },
    /// Check the decomposition and its certificates.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, conflicts_with = "all_orders")]
        order: Option<String>,
        /// Check every consistent order.
        #[arg(long)]
        all_orders: bool,
    },
    /// Draw a random Gaussian model for a directed MAG and sample from it.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// BIC_MF of a graph on data.
    Score {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        input: DataInput,
        #[arg(long)]
        order: Option<String>,
    },
    /// Rank every Markov equivalence class of directed MAGs on the data's
    /// variables.
    Rank {
        #[command(flatten)]
        input: DataInput,
        /// Report the rank of this graph's class.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Print only the best K classes.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Repeated simulate-and-rank runs.
    Experiment {
        /// Fixed generating graph.
        #[arg(long, conflicts_with = "random_edges")]
        graph: Option<PathBuf>,
        /// Uniform random directed MAGs with an edge count in `MIN-MAX`.
        #[arg(long)]
        random_edges: Option<String>,
        /// Vertex count for random graphs.
        #[arg(long, default_value_t = 5)]
        p: usize,
        /// Comma separated sample sizes.
        #[arg(long, default_value = "500,5000,50000")]
        ns: String,
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count (or list) the Markov equivalence classes of directed MAGs.
    Enumerate {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct DataInput {
    /// CSV with a header of vertex names and one sample per row.
    #[arg(long, required_unless_present = "cov", conflicts_with = "cov")]
    data: Option<PathBuf>,
    /// CSV covariance matrix with a header of vertex names; needs `--n`.
    #[arg(long, requires = "n")]
    cov: Option<PathBuf>,
    /// Sample size behind `--cov`.
    #[arg(long, requires = "cov")]
    n: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ImsetKind {
    M,
    N,
    Characteristic,
    Inclusion,
    Exclusion,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Transform {
    None,
    ZetaDown,
    ZetaUp,
    MobiusDown,
    MobiusUp,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let json = cli.format == Format::Json;
    let out = match &cli.cmd {
        Command::Msep { graph, a, b, c } => msep(graph, a, b, c, json)?,
        Command::Params { graph } => params(graph, json)?,
        Command::Imset {
            graph,
            kind,
            transform,
            order,
            all,
        } => imset(graph, *kind, *transform, order.as_deref(), *all, json)?,
        Command::Nie {
            graph,
            order,
            nonredundant,
        } => nie_cmd(graph, order.as_deref(), *nonredundant, json)?,
        Command::Verify {
            graph,
            order,
            all_orders,
        } => verify(graph, order.as_deref(), *all_orders, json)?,
        Command::Simulate { graph, n, seed } => simulate_cmd(graph, *n, *seed, json || cli.out.is_some())?,
        Command::Score {
            graph,
            input,
            order,
        } => score(graph, input, order.as_deref(), json)?,
        Command::Rank { input, truth, top } => rank(input, truth.as_deref(), *top, json)?,
        Command::Experiment {
            graph,
            random_edges,
            p,
            ns,
            reps,
            seed,
        } => experiment(graph.as_deref(), random_edges.as_deref(), *p, ns, *reps, *seed, json)?,
        Command::Enumerate { p, list } => enumerate(*p, *list, json)?,
    };
    out.emit(cli.out.as_deref())
}

fn to_json(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json serializes") + "\n"
}

/// The order from `--order`, else the one in the graph file, else the
/// lowest-index-first consistent order.
fn pick_order(pg: &ParsedGraph, flag: Option<&str>) -> Result<Order> {
    match (flag, &pg.order) {
        (Some(list), _) => Order::from_names(&pg.graph, list),
        (None, Some(o)) => Ok(o.clone()),
        (None, None) => Ok(pg.graph.consistent_order()),
    }
}

fn msep(graph: &Path, a: &str, b: &str, c: &str, json: bool) -> Result<Output> {
    let g = read_graph(graph)?.graph;
    let sep = m_separated(
        &g,
        g.set_from_names(a)?,
        g.set_from_names(b)?,
        g.set_from_names(c)?,
    )?;
    let word = if sep { "separated" } else { "connected" };
    let mut out = Output::default();
    if json {
        out.add("msep.json", to_json(json!({ "separated": sep })));
    } else {
        out.add("msep.txt", format!("{word}\n"));
    }
    Ok(out)
}

fn params(graph: &Path, json: bool) -> Result<Output> {
    let g = read_graph(graph)?.graph;
    let fam = ParamFamily::new(&g);
    let mut out = Output::default();
    if json {
        let heads: Vec<_> = fam
            .heads()
            .iter()
            .map(|ht| json!({ "head": g.fmt_set(ht.head), "tail": g.fmt_set(ht.tail) }))
            .collect();
        let sets: Vec<String> = fam.sets().map(|s| g.fmt_set(s)).collect();
        out.add(
            "params.json",
            to_json(json!({ "heads": heads, "parameterizing": sets, "max_size": fam.max_size() })),
        );
        return Ok(out);
    }
    let mut h = Csv::new(&["head", "tail"]);
    for ht in fam.heads() {
        h.row([g.fmt_set(ht.head), g.fmt_set(ht.tail)]);
    }
    let mut m = Csv::new(&["set", "size"]);
    for s in fam.sets() {
        m.row([g.fmt_set(s), s.len().to_string()]);
    }
    out.add("heads.csv", h.finish());
    out.add("parameterizing.csv", m.finish());
    Ok(out)
}

fn imset_json(g: &Admg, u: &Imset, all: bool) -> serde_json::Value {
    let rows: Vec<_> = g
        .all()
        .subsets()
        .filter(|&s| all || u.get(s) != 0)
        .map(|s| json!({ "subset": g.fmt_set(s), "value": u.get(s) }))
        .collect();
    json!(rows)
}

fn imset(
    graph: &Path,
    kind: ImsetKind,
    transform: Transform,
    order: Option<&str>,
    all: bool,
    json: bool,
) -> Result<Output> {
    let pg = read_graph(graph)?;
    let g = &pg.graph;
    let u = match kind {
        ImsetKind::M => m_imset(g),
        ImsetKind::N => n_imset(g),
        ImsetKind::Characteristic => characteristic_imset(g)?,
        ImsetKind::Inclusion => nie(g, &pick_order(&pg, order)?)?.inclusion,
        ImsetKind::Exclusion => nie(g, &pick_order(&pg, order)?)?.exclusion,
    };
    let u = match transform {
        Transform::None => u,
        Transform::ZetaDown => u.zeta_down()?,
        Transform::ZetaUp => u.zeta_up()?,
        Transform::MobiusDown => u.mobius_down()?,
        Transform::MobiusUp => u.mobius_up()?,
    };
    let mut out = Output::default();
    if json {
        out.add("imset.json", to_json(imset_json(g, &u, all)));
    } else {
        out.add("imset.csv", imset_csv(g, &u, all));
    }
    Ok(out)
}

fn cert_rows(g: &Admg, kind: &str, c: &SemiElemCombination, csv: &mut Csv) {
    for (t, k) in &c.terms {
        csv.row([kind.to_string(), t.fmt(g), k.to_string()]);
    }
}

fn nie_cmd(graph: &Path, order: Option<&str>, nonredundant: bool, json: bool) -> Result<Output> {
    let pg = read_graph(graph)?;
    let g = &pg.graph;
    let o = pick_order(&pg, order)?;
    let r = if nonredundant {
        nie_nonredundant(g, &o)?
    } else {
        nie(g, &o)?
    };
    let mut out = Output::default();
    if json {
        let cert = |c: &SemiElemCombination| -> Vec<_> {
            c.terms
                .iter()
                .map(|(t, k)| json!({ "triple": t.fmt(g), "coefficient": k.to_string() }))
                .collect()
        };
        out.add(
            "nie.json",
            to_json(json!({
                "order": o.fmt_names(g),
                "inclusion": imset_json(g, &r.inclusion, false),
                "exclusion": imset_json(g, &r.exclusion, false),
                "inclusion_certificate": cert(&r.inclusion_cert),
                "exclusion_certificate": cert(&r.exclusion_cert),
            })),
        );
        return Ok(out);
    }
    out.add("inclusion.csv", imset_csv(g, &r.inclusion, false));
    out.add("exclusion.csv", imset_csv(g, &r.exclusion, false));
    let mut c = Csv::new(&["imset", "triple", "coefficient"]);
    cert_rows(g, "inclusion", &r.inclusion_cert, &mut c);
    cert_rows(g, "exclusion", &r.exclusion_cert, &mut c);
    out.add("certificates.csv", c.finish());
    Ok(out)
}

fn verify(graph: &Path, order: Option<&str>, all_orders: bool, json: bool) -> Result<Output> {
    let pg = read_graph(graph)?;
    let g = &pg.graph;
    let orders = if all_orders {
        g.all_consistent_orders()
    } else {
        vec![pick_order(&pg, order)?]
    };
    let mut csv = Csv::new(&["order", "check", "passed", "skipped", "failures", "first_failure"]);
    let mut rows = Vec::new();
    let mut ok = true;
    for o in &orders {
        let rep = verify_decomposition(g, o)?;
        ok &= rep.passed();
        for c in &rep.checks {
            let first = c.failures.first().cloned().unwrap_or_default();
            csv.row([
                o.fmt_names(g),
                c.name.to_string(),
                c.passed().to_string(),
                c.skipped.to_string(),
                c.failures.len().to_string(),
                first.clone(),
            ]);
            rows.push(json!({
                "order": o.fmt_names(g), "check": c.name, "passed": c.passed(),
                "skipped": c.skipped, "failures": c.failures,
            }));
        }
    }
    let mut out = Output::default();
    if json {
        out.add("verify.json", to_json(json!(rows)));
    } else {
        out.add("verify.csv", csv.finish());
    }
    if !ok {
        // print what was found before reporting failure
        out.emit(None)?;
        return Err(Error::Precondition("decomposition checks failed".into()));
    }
    Ok(out)
}

fn matrix_json(m: &nalgebra::DMatrix<f64>) -> serde_json::Value {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    json!(rows)
}

/// The fitted model goes alongside the data when writing to a directory or
/// when JSON is requested.
fn simulate_cmd(graph: &Path, n: usize, seed: u64, with_model: bool) -> Result<Output> {
    let g = read_graph(graph)?.graph;
    let sim = simulate(&g, n, seed)?;
    let mut out = Output::default();
    let mut text = format!("# seed={seed}\n");
    let names: Vec<&str> = g.names().iter().map(String::as_str).collect();
    let mut c = Csv::new(&names);
    for row in sim.data.row_iter() {
        c.row(row.iter().map(|&x| fmt_f64(x)));
    }
    text += &c.finish();
    out.add("data.csv", text);
    if with_model {
        let model = json!({
            "seed": seed,
            "graph": serde_json::from_str::<serde_json::Value>(&graph_to_json(&g)).expect("valid json"),
            "b": matrix_json(&sim.model.b),
            "omega": matrix_json(&sim.model.omega),
            "sigma": matrix_json(&sim.model.sigma),
        });
        out.add("model.json", to_json(model));
        out.add("graph.json", graph_to_json(&g) + "\n");
    }
    Ok(out)
}

fn load_moments(input: &DataInput, names: Option<&[String]>) -> Result<(Vec<String>, SampleMoments)> {
    match (&input.data, &input.cov) {
        (Some(_), None) if input.n.is_some() => Err(Error::Precondition(
            "--n goes with --cov; data files give their own sample size".into(),
        )),
        (Some(path), None) => {
            let t = read_table(path)?;
            let names = names.map_or_else(|| t.names.clone(), <[String]>::to_vec);
            let m = SampleMoments::from_data(&t.matrix(&names)?)?;
            Ok((names, m))
        }
        (None, Some(path)) => {
            let t = read_table(path)?;
            let names = names.map_or_else(|| t.names.clone(), <[String]>::to_vec);
            let n = input
                .n
                .ok_or_else(|| Error::Precondition("--cov needs --n".into()))?;
            Ok((names.clone(), SampleMoments::from_covariance(t.covariance(&names)?, n)?))
        }
        _ => Err(Error::Precondition("give exactly one of --data and --cov".into())),
    }
}

fn score(graph: &Path, input: &DataInput, order: Option<&str>, json: bool) -> Result<Output> {
    let pg = read_graph(graph)?;
    let g = &pg.graph;
    let o = pick_order(&pg, order)?;
    let (_, m) = load_moments(input, Some(g.names()))?;
    let scorer = BicMfScorer::new(g, &o)?;
    let s = scorer.score(&m)?;
    let branch = format!("{:?}", scorer.plan.branch).to_lowercase();
    let mut out = Output::default();
    if json {
        out.add(
            "score.json",
            to_json(json!({
                "score": s.score, "loglik": s.loglik, "dimension": s.dimension,
                "penalty": s.penalty, "branch": branch, "n": m.n, "order": o.fmt_names(g),
            })),
        );
    } else {
        let mut c = Csv::new(&["score", "loglik", "dimension", "penalty", "branch", "n", "order"]);
        c.row([
            fmt_f64(s.score),
            fmt_f64(s.loglik),
            s.dimension.to_string(),
            fmt_f64(s.penalty),
            branch,
            m.n.to_string(),
            o.fmt_names(g),
        ]);
        out.add("score.csv", c.finish());
    }
    Ok(out)
}

/// Same graph with its vertices listed in the order of `names`.
fn reorder_to(g: &Admg, names: &[String]) -> Result<Admg> {
    let pos = |v: usize| {
        names
            .iter()
            .position(|x| x == g.name(v))
            .ok_or_else(|| Error::Precondition(format!("`{}` is not a data column", g.name(v))))
    };
    if names.len() != g.n() {
        return Err(Error::Precondition(format!(
            "graph has {} vertices, data has {} columns",
            g.n(),
            names.len()
        )));
    }
    let d = g
        .directed_edges()
        .into_iter()
        .map(|(a, b)| Ok((pos(a)?, pos(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let bi = g
        .bidirected_edges()
        .into_iter()
        .map(|(a, b)| Ok((pos(a)?, pos(b)?)))
        .collect::<Result<Vec<_>>>()?;
    Admg::new(names, &d, &bi)
}

fn catalog_for(p: usize) -> Result<(MecCatalog, Ranker)> {
    let cat = build_mec_catalog(p)?;
    let ranker = Ranker::new(&cat)?;
    Ok((cat, ranker))
}

fn rank(input: &DataInput, truth: Option<&Path>, top: Option<usize>, json: bool) -> Result<Output> {
    let (names, m) = load_moments(input, None)?;
    let (cat, ranker) = catalog_for(names.len())?;
    let report = ranker.rank(&m)?;
    let rep_of = |c: usize| -> Result<String> {
        Ok(cat.classes[c].representative.renamed(&names)?.edge_summary())
    };
    let limit = top.unwrap_or(cat.len()).min(cat.len());
    let mut out = Output::default();
    let truth_row = match truth {
        None => None,
        Some(path) => {
            let g = reorder_to(&read_graph(path)?.graph, &names)?;
            let c = cat
                .class_of(&g)
                .ok_or_else(|| Error::Precondition("truth graph is not a directed MAG".into()))?;
            Some((c, report.rank_of(c), report.scores[c].score))
        }
    };
    if json {
        let rows = report.ranking[..limit]
            .iter()
            .map(|&c| {
                let s = &report.scores[c];
                Ok(json!({
                    "class_id": c, "representative": rep_of(c)?, "score": s.score,
                    "loglik": s.loglik, "dimension": s.dimension, "rank": report.rank_of(c),
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        let truth = truth_row.map(|(c, r, s)| json!({ "class_id": c, "rank": r, "score": s }));
        out.add(
            "ranks.json",
            to_json(json!({ "classes": cat.len(), "ranks": rows, "truth": truth, "ties": report.ties })),
        );
        return Ok(out);
    }
    let mut c = Csv::new(&["class_id", "representative", "score", "loglik", "dimension", "rank"]);
    for &id in &report.ranking[..limit] {
        let s = &report.scores[id];
        c.row([
            id.to_string(),
            rep_of(id)?,
            fmt_f64(s.score),
            fmt_f64(s.loglik),
            s.dimension.to_string(),
            report.rank_of(id).to_string(),
        ]);
    }
    out.add("ranks.csv", c.finish());
    if let Some((id, r, s)) = truth_row {
        let mut t = Csv::new(&["class_id", "rank", "score"]);
        t.row([id.to_string(), r.to_string(), fmt_f64(s)]);
        out.add("truth.csv", t.finish());
    }
    Ok(out)
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Precondition(format!("--random-edges expects MIN-MAX, got `{s}`"));
    let (a, b) = s.split_once('-').ok_or_else(bad)?;
    let lo: usize = a.trim().parse().map_err(|_| bad())?;
    let hi: usize = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn parse_ns(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Precondition(format!("--ns: bad sample size `{t}`")))
        })
        .collect()
}

fn experiment(
    graph: Option<&Path>,
    random_edges: Option<&str>,
    p: usize,
    ns: &str,
    reps: usize,
    seed: u64,
    json: bool,
) -> Result<Output> {
    let (generator, names) = match (graph, random_edges) {
        (Some(path), None) => {
            let g = read_graph(path)?.graph;
            let names = g.names().to_vec();
            (Generator::Fixed(g), names)
        }
        (None, Some(r)) => {
            let (min_edges, max_edges) = parse_range(r)?;
            (Generator::RandomMags { min_edges, max_edges }, default_names(p))
        }
        _ => {
            return Err(Error::Precondition(
                "give exactly one of --graph and --random-edges".into(),
            ))
        }
    };
    let cfg = ExperimentConfig {
        generator,
        ns: parse_ns(ns)?,
        reps,
        seed,
    };
    let (cat, ranker) = catalog_for(names.len())?;
    let res = recovery_experiment(&cat, &ranker, &cfg)?;
    let mut out = Output::default();
    if json {
        out.add(
            "experiment.json",
            to_json(json!({
                "seed": seed,
                "summary": res.summary,
                "outcomes": res.outcomes,
                "classes": cat.len(),
            })),
        );
        return Ok(out);
    }
    let mut summary = Csv::new(&[
        "n",
        "reps",
        "top1",
        "mean_rank",
        "seed",
    ]);
    // wall times live apart so that the other files are reproducible byte
    // for byte
    let mut timing = Csv::new(&["n", "wall_seconds", "max_rank_seconds"]);
    let mut hist = Csv::new(&["n", "bin", "count", "seed"]);
    for s in &res.summary {
        let slowest = res
            .outcomes
            .iter()
            .filter(|o| o.n == s.n)
            .map(|o| o.seconds)
            .fold(0.0, f64::max);
        summary.row([
            s.n.to_string(),
            s.reps.to_string(),
            fmt_f64(s.top1),
            fmt_f64(s.mean_rank),
            seed.to_string(),
        ]);
        timing.row([s.n.to_string(), fmt_f64(s.wall_seconds), fmt_f64(slowest)]);
        for (bin, count) in res.histogram(s.n) {
            hist.row([s.n.to_string(), bin.to_string(), count.to_string(), seed.to_string()]);
        }
    }
    let mut outcomes = Csv::new(&["n", "rep", "truth_class", "truth", "rank", "seed"]);
    for o in &res.outcomes {
        let rep = cat.classes[o.truth_class].representative.renamed(&names)?;
        outcomes.row([
            o.n.to_string(),
            o.rep.to_string(),
            o.truth_class.to_string(),
            rep.edge_summary(),
            o.rank.to_string(),
            seed.to_string(),
        ]);
    }
    out.add("summary.csv", summary.finish());
    out.add("histogram.csv", hist.finish());
    out.add("outcomes.csv", outcomes.finish());
    out.add("timing.csv", timing.finish());
    Ok(out)
}

fn enumerate(p: usize, list: bool, json: bool) -> Result<Output> {
    let cat = build_mec_catalog(p)?;
    let mut out = Output::default();
    if json {
        let classes: Vec<_> = if list {
            cat.classes
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    json!({ "class_id": i, "representative": c.representative.edge_summary(),
                            "members": c.members })
                })
                .collect()
        } else {
            Vec::new()
        };
        out.add(
            "enumerate.json",
            to_json(json!({ "p": p, "classes": cat.len(), "mags": cat.mag_codes.len(), "list": classes })),
        );
        return Ok(out);
    }
    if list {
        let mut c = Csv::new(&["class_id", "representative", "members"]);
        for (i, cl) in cat.classes.iter().enumerate() {
            c.row([i.to_string(), cl.representative.edge_summary(), cl.members.to_string()]);
        }
        out.add("classes.csv", c.finish());
    } else {
        out.add("count.txt", format!("{}\n", cat.len()));
    }
    Ok(out)
}
