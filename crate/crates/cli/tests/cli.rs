use std::path::Path;
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;
use tempfile::TempDir;

fn qlattice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlattice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

/// The (2,7,3) graph exported once and shared by the tests that need it.
fn exported() -> &'static Path {
    static DIR: OnceLock<TempDir> = OnceLock::new();
    let dir = DIR.get_or_init(|| {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("j273.txt");
        let o = qlattice(&["export-graph", "--out", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        dir
    });
    Box::leak(dir.path().join("j273.txt").into_boxed_path())
}

#[test]
fn verify_default_params_passes() {
    let o = qlattice(&["verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["mode"], "global");
    assert_eq!(v["all_passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() > 30);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_rejects_n_not_above_2k() {
    let o = qlattice(&["--q", "2", "--n", "6", "--k", "3", "verify"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n > 2k"));
}

#[test]
fn verify_larger_params_runs_sampled() {
    let o = qlattice(&["--q", "2", "--n", "9", "--k", "4", "--sample", "50", "verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["mode"], "sampled");
    assert_eq!(v["sample"], 50);
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = qlattice(&["verify", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn geometric_table_json() {
    let v = json(&qlattice(&["gram", "geometric", "--i", "2", "--format", "json"]));
    assert_eq!(v["shape"], serde_json::json!([4, 4]));
    let ints: Vec<i64> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            assert_eq!(e[1], "1");
            e[0].as_str().unwrap().parse().unwrap()
        })
        .collect();
    assert_eq!(
        ints,
        vec![840, 78, 120, 672, 78, 840, 120, 672, 120, 120, 126, 96, 672, 672, 96, 2976]
    );
}

#[test]
fn transition_json_carries_det() {
    let v = json(&qlattice(&["gram", "transition", "--variant", "full", "--direction", "geo-to-comb", "--format", "json"]));
    assert_eq!(v["det"], serde_json::json!(["-32", "1"]));
    let csv = stdout(&qlattice(&["gram", "transition", "--format", "csv"]));
    assert!(csv.lines().next().unwrap().contains("det=-32"));
}

fn csv_cells(csv: &str) -> Vec<String> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .flat_map(|l| l.split(',').skip(1).map(str::to_string).collect::<Vec<_>>())
        .collect()
}

fn json_cells(v: &Value) -> Vec<String> {
    v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let (n, d) = (e[0].as_str().unwrap(), e[1].as_str().unwrap());
            if d == "1" { n.to_string() } else { format!("{n}/{d}") }
        })
        .collect()
}

#[test]
fn csv_and_json_agree() {
    let tables: [&[&str]; 6] = [
        &["gram", "geometric"],
        &["gram", "mixed"],
        &["gram", "combinatorial"],
        &["gram", "m-inverse"],
        &["gram", "transition", "--variant", "bar", "--direction", "comb-to-geo"],
        &["--q", "2", "--n", "9", "--k", "4", "gram", "transition", "--i", "3", "--variant", "check"],
    ];
    for args in tables {
        let mut j = args.to_vec();
        j.extend(["--format", "json"]);
        let mut c = args.to_vec();
        c.extend(["--format", "csv"]);
        let jv = json(&qlattice(&j));
        let co = qlattice(&c);
        assert!(co.status.success());
        assert_eq!(json_cells(&jv), csv_cells(&stdout(&co)), "{args:?}");
    }
}

#[test]
fn gram_rejects_bad_i() {
    for i in ["1", "3"] {
        let o = qlattice(&["gram", "geometric", "--i", i]);
        assert_eq!(o.status.code(), Some(2), "i = {i}");
    }
}

#[test]
fn recover_default_coefficients() {
    let v = json(&qlattice(&["recover", "--i", "2", "--format", "json"]));
    assert_eq!(v["all_equal"], true);
    let full = &v["variants"][0];
    assert_eq!(full["variant"], "full");
    assert_eq!(full["meet_coeffs"], serde_json::json!(["7/4", "1/4", "-1/32", "-1/8"]));
    assert_eq!(full["join_coeffs"], serde_json::json!(["-9", "-3", "1/8", "3/2"]));
    assert_eq!(v["meet_hat"]["coords"].as_array().unwrap().len(), 127);
}

#[test]
fn recover_other_params() {
    for (q, n, k, i) in [("2", "9", "4", "3"), ("2", "9", "4", "2"), ("3", "7", "3", "2")] {
        for seed in ["1", "7"] {
            let o = qlattice(&["--q", q, "--n", n, "--k", k, "--seed", seed, "recover", "--i", i, "--format", "json"]);
            assert_eq!(o.status.code(), Some(0), "({q},{n},{k}) i={i}");
            let v = json(&o);
            assert_eq!(v["all_equal"], true);
            assert_eq!(v["variants"].as_array().unwrap().len(), 3);
        }
    }
}

#[test]
fn recover_is_deterministic() {
    let a = stdout(&qlattice(&["--seed", "5", "recover", "--format", "json"]));
    let b = stdout(&qlattice(&["--seed", "5", "recover", "--format", "json"]));
    assert_eq!(a, b);
}

#[test]
fn export_refuses_over_cap() {
    let o = qlattice(&["--q", "2", "--n", "9", "--k", "4", "export-graph"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn explore_exported_graph() {
    let path = exported().to_str().unwrap();
    let o = qlattice(&["explore", path, "--i", "2", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["i"], 2);
    assert_eq!(v["problem1"]["allowed"], serde_json::json!([120, -7]));
    assert_eq!(v["problem1"]["all_allowed"], true);
    assert_eq!(v["problem1"]["spectrum"]["120"], 651);
    assert_eq!(v["problem1"]["spectrum"]["-7"], 11160);
    assert_eq!(v["problem2"]["equitable"], true);
    assert_eq!(v["problem3"]["passes"], true);
    assert_eq!(v["problem3"]["diameter"], 2);
}

#[test]
fn explore_explicit_pair_and_text() {
    let path = exported().to_str().unwrap();
    let j = json(&qlattice(&["explore", path, "--i", "2", "--format", "json"]));
    let pair = format!("{},{}", j["pair"][0], j["pair"][1]);
    let o = qlattice(&["explore", path, "--pair", &pair]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("allowed values: [120, -7]"));
    assert!(text.contains("problem 2 (equitable): true"));
}

#[test]
fn explore_rejects_adjacent_pair() {
    let path = exported().to_str().unwrap();
    let o = qlattice(&["explore", path, "--i", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explore_rejects_mismatched_flags() {
    let path = exported().to_str().unwrap();
    let o = qlattice(&["--q", "3", "explore", path]);
    assert_eq!(o.status.code(), Some(2));
}

fn read_lists(path: &Path) -> (String, Vec<Vec<u32>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = format!("{}\n{}\n", lines.next().unwrap(), lines.next().unwrap());
    let lists = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (_, rest) = l.split_once(':').unwrap();
            rest.split_whitespace().map(|t| t.parse().unwrap()).collect()
        })
        .collect();
    (header, lists)
}

fn write_lists(path: &Path, header: &str, lists: &[Vec<u32>]) {
    let mut s = header.to_string();
    for (v, l) in lists.iter().enumerate() {
        let mut l = l.clone();
        l.sort_unstable();
        let toks: Vec<String> = l.iter().map(u32::to_string).collect();
        s.push_str(&format!("{v}: {}\n", toks.join(" ")));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn explore_rejects_edge_swap() {
    let (header, mut lists) = read_lists(exported());
    // swap a-b, c-d for a-c, b-d, keeping every degree
    let a = 0u32;
    let b = lists[0][0];
    let (c, d) = (1..lists.len() as u32)
        .filter(|&c| c != b && !lists[a as usize].contains(&c))
        .find_map(|c| {
            lists[c as usize]
                .iter()
                .copied()
                .find(|&d| d != a && d != b && !lists[b as usize].contains(&d))
                .map(|d| (c, d))
        })
        .unwrap();
    let mut unlink = |u: u32, v: u32| {
        lists[u as usize].retain(|&w| w != v);
        lists[v as usize].retain(|&w| w != u);
    };
    unlink(a, b);
    unlink(c, d);
    for (u, v) in [(a, c), (b, d)] {
        lists[u as usize].push(v);
        lists[v as usize].push(u);
    }
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("swapped.txt");
    write_lists(&path, &header, &lists);
    let o = qlattice(&["explore", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("validation"));
}

#[test]
fn explore_rejects_removed_edge() {
    let (header, mut lists) = read_lists(exported());
    let b = lists[0].remove(0);
    lists[b as usize].retain(|&w| w != 0);
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("removed.txt");
    write_lists(&path, &header, &lists);
    let o = qlattice(&["explore", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degree"));
}

#[test]
fn explore_rejects_malformed_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "drg 2 7 3\nvertices 2\n0: 1\n1: x\n").unwrap();
    let o = qlattice(&["explore", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.json");
    let o = qlattice(&["gram", "combinatorial", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["kind"], "combinatorial");
}
