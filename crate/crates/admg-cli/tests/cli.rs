use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BRIDGED: &str = "# two chains joined by confounders\n\
vertices: a b c d e\n\
a -> b\n\
e -> d\n\
b <-> c\n\
c <-> d\n\
order: e a d b c\n";

const CHAIN5: &str = "vertices: a b c d e\na <-> b\nb <-> c\nc <-> d\nd <-> e\n";

fn admg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_admg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = admg(args);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn msep_prints_a_word() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "g.admg", BRIDGED);
    assert_eq!(ok(&["msep", "--graph", s(&g), "--a", "a", "--b", "e"]), "separated\n");
    assert_eq!(
        ok(&["msep", "--graph", s(&g), "--a", "a", "--b", "c", "--c", "b"]),
        "connected\n"
    );
    let o = admg(&["msep", "--graph", s(&g), "--a", "a", "--b", "q"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn nie_on_the_worked_example() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "g3.admg", BRIDGED);
    let out = t.path().join("nie");
    ok(&["--out", s(&out), "nie", "--graph", s(&g), "--order", "e,a,d,b,c"]);
    let excl = fs::read_to_string(out.join("exclusion.csv")).unwrap();
    assert_eq!(excl, "subset,value\nac,1\nce,1\nace,2\n");
    let incl = fs::read_to_string(out.join("inclusion.csv")).unwrap();
    assert_eq!(incl.lines().count(), 17);
    for row in ["ac,2", "ace,3", "ce,2", "abde,1"] {
        assert!(incl.lines().any(|l| l.starts_with(row)), "{row} missing");
    }
    let certs = fs::read_to_string(out.join("certificates.csv")).unwrap();
    assert!(certs.contains("exclusion,\"<c,e|a>\",1"));

    // the imset subcommand agrees
    let e = ok(&["imset", "--graph", s(&g), "--kind", "exclusion"]);
    assert_eq!(e, excl);
}

#[test]
fn imsets_and_graphs_reparse() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "g.admg", BRIDGED);
    let n = ok(&["imset", "--graph", s(&g), "--kind", "n", "--all"]);
    assert_eq!(n.lines().count(), 33);
    assert!(n.contains("\nabcde,0\n"));
    let m = ok(&["imset", "--graph", s(&g), "--transform", "mobius-up"]);
    assert!(m.starts_with("subset,value\n"));

    let sim = t.path().join("sim");
    ok(&["--out", s(&sim), "simulate", "--graph", s(&g), "--n", "3", "--seed", "1"]);
    // the JSON copy of the graph yields the same imset
    let again = ok(&["imset", "--graph", s(&sim.join("graph.json")), "--kind", "n", "--all"]);
    assert_eq!(again, n);
}

#[test]
fn params_tables() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "g.admg", "vertices: a b c\na -> b\nb <-> c\n");
    let out = ok(&["params", "--graph", s(&g)]);
    assert!(out.contains("# heads.csv\nhead,tail\n"));
    assert!(out.contains("\nbc,a\n"));
    assert!(out.contains("abc,3"));
    let j = ok(&["--format", "json", "params", "--graph", s(&g)]);
    let v: serde_json::Value = serde_json::from_str(&j).unwrap();
    assert_eq!(v["max_size"], 3);
}

#[test]
fn verify_passes_every_order() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "g.admg", BRIDGED);
    let out = ok(&["verify", "--graph", s(&g), "--all-orders"]);
    let rows: Vec<_> = out.lines().skip(1).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.contains(",true,")), "{out}");
}

#[test]
fn simulate_is_seeded() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "g.admg", CHAIN5);
    let a = ok(&["simulate", "--graph", s(&g), "--n", "20", "--seed", "5"]);
    let b = ok(&["simulate", "--graph", s(&g), "--n", "20", "--seed", "5"]);
    let c = ok(&["simulate", "--graph", s(&g), "--n", "20", "--seed", "6"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("# seed=5\na,b,c,d,e\n"));
    assert_eq!(a.lines().count(), 22);

    let dir = t.path().join("out");
    ok(&["--out", s(&dir), "simulate", "--graph", s(&g), "--n", "4", "--seed", "5"]);
    let model: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("model.json")).unwrap()).unwrap();
    assert_eq!(model["seed"], 5);
    assert_eq!(model["sigma"].as_array().unwrap().len(), 5);

    // non-ancestral graphs are refused
    let bow = write(t.path(), "bow.admg", "vertices: a b\na -> b\na <-> b\n");
    assert_eq!(admg(&["simulate", "--graph", s(&bow), "--n", "4"]).status.code(), Some(1));
}

#[test]
fn score_from_data_and_covariance() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "g.admg", CHAIN5);
    let data = write(
        t.path(),
        "d.csv",
        &ok(&["simulate", "--graph", s(&g), "--n", "400", "--seed", "2"]),
    );
    let out = ok(&["score", "--graph", s(&g), "--data", s(&data)]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "score,loglik,dimension,penalty,branch,n,order"
    );
    let f: Vec<&str> = lines.next().unwrap().split(',').collect();
    let (score, loglik, penalty): (f64, f64, f64) =
        (f[0].parse().unwrap(), f[1].parse().unwrap(), f[3].parse().unwrap());
    assert_eq!(f[2], "14");
    assert!((score - (loglik - penalty)).abs() < 1e-6);
    assert!((penalty - 7.0 * 400f64.ln()).abs() < 1e-9);

    // a covariance file with the same moments scores the same
    let cov = "a,b\n2,0.5\n0.5,1\n";
    let two = write(t.path(), "two.admg", "vertices: b a\na -> b\n");
    let c = write(t.path(), "cov.csv", cov);
    let x = ok(&["score", "--graph", s(&two), "--cov", s(&c), "--n", "100"]);
    assert!(x.contains(",5,"), "{x}");

    let o = admg(&["score", "--graph", s(&g), "--cov", s(&c)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn singular_data_is_a_numerical_failure() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "g.admg", "vertices: a b\na -> b\n");
    let d = write(t.path(), "d.csv", "a,b\n1,2\n2,4\n3,6\n4,8\n");
    let o = admg(&["score", "--graph", s(&g), "--data", s(&d)]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn validation_errors_exit_one_and_name_the_problem() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "bad.admg", "vertices: a b\na -> c\n");
    let o = admg(&["params", "--graph", s(&g)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = admg(&["params", "--graph", s(&t.path().join("missing.admg"))]);
    assert_eq!(o.status.code(), Some(1));

    let o = admg(&["params", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--bogus"));

    let d = write(t.path(), "d.csv", "a,b\n1,2\n3,x\n");
    let ok_graph = write(t.path(), "g.admg", "vertices: a b\n");
    let o = admg(&["score", "--graph", s(&ok_graph), "--data", s(&d)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(admg(&["--help"]).status.code(), Some(0));
}

#[test]
fn enumerate_counts_classes() {
    assert_eq!(ok(&["enumerate", "--p", "3"]).trim(), "11");
    let list = ok(&["--format", "json", "enumerate", "--p", "2", "--list"]);
    let v: serde_json::Value = serde_json::from_str(&list).unwrap();
    assert_eq!(v["classes"], 2);
    assert_eq!(v["mags"], 4);
    assert_eq!(admg(&["enumerate", "--p", "6"]).status.code(), Some(1));
}

#[test]
fn rank_finds_the_truth_with_plenty_of_data() {
    let t = TempDir::new().unwrap();
    let g = write(t.path(), "g.admg", "vertices: a b c\na -> b\nc -> b\n");
    let data = write(
        t.path(),
        "d.csv",
        &ok(&["simulate", "--graph", s(&g), "--n", "20000", "--seed", "8"]),
    );
    let dir = t.path().join("rank");
    ok(&["--out", s(&dir), "rank", "--data", s(&data), "--truth", s(&g)]);
    let truth = fs::read_to_string(dir.join("truth.csv")).unwrap();
    let row: Vec<&str> = truth.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "1");
    let ranks = fs::read_to_string(dir.join("ranks.csv")).unwrap();
    assert_eq!(ranks.lines().count(), 12);
    assert!(ranks.lines().nth(1).unwrap().ends_with(",1"));
}

#[test]
fn experiments_are_byte_identical_per_seed() {
    let t = TempDir::new().unwrap();
    let run = |name: &str, seed: &str| {
        let dir = t.path().join(name);
        ok(&[
            "--threads", "2", "--out", s(&dir), "experiment", "--random-edges", "0-2", "--p", "3",
            "--ns", "200,2000", "--reps", "5", "--seed", seed,
        ]);
        dir
    };
    let (a, b, c) = (run("a", "11"), run("b", "11"), run("c", "12"));
    for f in ["summary.csv", "histogram.csv", "outcomes.csv"] {
        let x = fs::read(a.join(f)).unwrap();
        assert_eq!(x, fs::read(b.join(f)).unwrap(), "{f}");
        let text = String::from_utf8(x).unwrap();
        assert!(text.lines().skip(1).all(|l| l.ends_with(",11")), "{f} lacks the seed");
    }
    assert_ne!(
        fs::read(a.join("outcomes.csv")).unwrap(),
        fs::read(c.join("outcomes.csv")).unwrap()
    );
    let summary = fs::read_to_string(a.join("summary.csv")).unwrap();
    assert!(summary.starts_with("n,reps,top1,mean_rank,seed\n200,5,"));
    assert!(a.join("timing.csv").exists());
}
