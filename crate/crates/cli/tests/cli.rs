use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use snakegraph::graph::{bowtie, complete_bipartite, cycle, io, rectangular_grid, Graph};
use snakegraph::solver::winnable;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_snakegraph"))
        .args(args)
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = if stdout.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&stdout).unwrap()
    };
    (
        out.status.code().unwrap(),
        json,
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write_graph(dir: &Path, name: &str, g: &Graph) -> String {
    let p = dir.join(name);
    fs::write(&p, io::to_json(g)).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_bowtie_is_winnable_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "bowtie.json", &bowtie());
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let (code, first, _) = run(&["solve", "--graph", &g, "--cache-dir", cache]);
    assert_eq!(code, 0);
    assert_eq!(first["winnable"], true);
    assert_eq!(first["witness"], Value::Null);
    assert_eq!(first["cached"], false);
    assert!(first["nodes"].as_u64().unwrap() > 0);
    let (_, second, _) = run(&["solve", "--graph", &g, "--cache-dir", cache]);
    assert_eq!(second["cached"], true);
    assert_eq!(
        (&second["winnable"], &second["nodes"]),
        (&first["winnable"], &first["nodes"])
    );

    let hash = first["sha256"].as_str().unwrap();
    let entry: Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("cache").join(format!("{hash}.json"))).unwrap(),
    )
    .unwrap();
    assert_eq!(
        (entry["format"].as_str(), entry["version"].as_u64()),
        (Some("snakegraph-solve-cache"), Some(1))
    );

    // a damaged entry is a miss, not an error
    fs::write(dir.path().join("cache").join(format!("{hash}.json")), "{").unwrap();
    let (code, third, _) = run(&["solve", "--graph", &g, "--cache-dir", cache]);
    assert_eq!((code, &third["cached"]), (0, &Value::Bool(false)));
}

#[test]
fn solve_reports_the_solver_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = dir.path().join("p3.txt");
    fs::write(&p3, "0 1\n1 2\n").unwrap();
    let (code, v, _) = run(&["solve", "--graph", p3.to_str().unwrap()]);
    assert_eq!(code, 0);
    let w = winnable(&snakegraph::graph::path(3)).unwrap();
    let (a0, a1) = w.witness.unwrap();
    assert_eq!(v["winnable"], false);
    assert_eq!(
        (
            v["witness"]["spawn"].as_u64(),
            v["witness"]["first_apple"].as_u64()
        ),
        (Some(a0 as u64), Some(a1 as u64))
    );
}

#[test]
fn classify_k24_is_a_bipartite_imbalance() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "k24.json", &complete_bipartite(2, 4));
    let (code, v, _) = run(&["classify", "--graph", &g]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "NotWinnable");
    assert_eq!(v["reason"], "BipartiteImbalance");
}

#[test]
fn enumerate_five_cross_checks_cleanly() {
    let (code, v, _) = run(&["enumerate", "--n", "5", "--cross-check"]);
    assert_eq!(code, 0);
    assert_eq!(v["graphs"], 21);
    assert_eq!(v["cross_check"]["solved"], 21);
    assert_eq!(v["cross_check"]["disagreements"], Value::Array(vec![]));
    let (code, _, err) = run(&["enumerate", "--n", "2"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn strategy_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bow = write_graph(dir.path(), "bowtie.json", &bowtie());
    let (code, v, _) = run(&["strategy-check", "--graph", &bow, "--policy", "cut-vertex"]);
    assert_eq!(code, 0);
    assert_eq!(
        (&v["valid"], &v["role"]),
        (&Value::Bool(true), &Value::from("snake"))
    );
    assert!(v["leaves"].as_u64().unwrap() > 0);
    assert_eq!(v["depth"], 5);

    // no snake strategy wins on an unwinnable graph
    let k24 = write_graph(dir.path(), "k24.json", &complete_bipartite(2, 4));
    let (code, v, _) = run(&["strategy-check", "--graph", &k24, "--policy", "greedy"]);
    assert_eq!((code, &v["valid"]), (4, &Value::Bool(false)));
    let k25 = write_graph(dir.path(), "k25.json", &complete_bipartite(2, 5));
    let (code, v, _) = run(&["strategy-check", "--graph", &k25, "--policy", "odd-bipartite"]);
    assert_eq!(
        (code, &v["valid"], &v["role"]),
        (0, &Value::Bool(true), &Value::from("placer"))
    );
    // inapplicable: even order
    let (code, _, _) = run(&["strategy-check", "--graph", &k24, "--policy", "odd-bipartite"]);
    assert_eq!(code, 2);

    let (code, _, err) = run(&["strategy-check", "--graph", &k24, "--policy", "nonesuch"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown policy"));
    let (code, _, _) = run(&["strategy-check", "--graph", &k24, "--policy", "theta"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&[
        "strategy-check",
        "--graph",
        &bow,
        "--policy",
        "cut-vertex",
        "--ceiling",
        "3",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn input_and_ceiling_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 0\n").unwrap();
    let (code, _, err) = run(&["solve", "--graph", bad.to_str().unwrap()]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run(&[
        "classify",
        "--graph",
        dir.path().join("missing").to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    let bow = write_graph(dir.path(), "bowtie.json", &bowtie());
    let (code, _, _) = run(&["solve", "--graph", &bow, "--ceiling", "1"]);
    assert_eq!(code, 3);
    let big = write_graph(dir.path(), "c20.json", &cycle(20));
    let (code, _, _) = run(&["solve", "--graph", &big]);
    assert_eq!(code, 3);
}

#[test]
fn reduce_writes_the_reduced_grid() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "g.json", &rectangular_grid(2, 3).unwrap());
    let out = dir.path().join("r.json");
    let rep = dir.path().join("rep.json");
    let (code, v, err) = run(&[
        "reduce",
        "--in",
        &g,
        "--out",
        out.to_str().unwrap(),
        "--report",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        (&v["result"], &v["gadget_holds"]),
        (&Value::from("reduced"), &Value::Bool(true))
    );
    let reduced = io::parse_any(&fs::read_to_string(&out).unwrap()).unwrap().graph;
    assert_eq!(reduced.n(), 15);
    assert!(reduced.coords().is_some());
    let report: Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(
        (&report["holds"], &report["hamiltonian"]),
        (&Value::Bool(true), &Value::Bool(true))
    );

    // odd order and missing coordinates are input errors
    let odd = write_graph(dir.path(), "odd.json", &rectangular_grid(1, 3).unwrap());
    let (code, _, _) = run(&["reduce", "--in", &odd, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 2);
    let bare = write_graph(dir.path(), "bare.json", &cycle(4));
    let (code, _, _) = run(&["reduce", "--in", &bare, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 2);
}
