//! End-to-end runs of the installed binary: exit codes, stdin plumbing,
//! experiment outputs, and the PUREPAIR_THREADS override.

use std::io::Write;
use std::process::{Command, Stdio};

fn run(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_purepair"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().expect("killed by signal"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn edgelist(n: usize, edges: &[(usize, usize)]) -> String {
    let mut s = format!("{} {}\n", n, edges.len());
    for (u, v) in edges {
        s.push_str(&format!("{} {}\n", u, v));
    }
    s
}

fn certify(graph: &str, pattern: &str, eps: &str) -> (i32, String) {
    let (code, stdout, stderr) = run(
        &["--format", "edgelist", "certify", "--graph", "-", "--pattern", pattern, "--eps", eps],
        graph,
        &[],
    );
    assert!(stderr.is_empty(), "unexpected stderr: {}", stderr);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    (code, v["kind"].as_str().unwrap().to_string())
}

#[test]
fn certify_exit_codes_cover_the_trichotomy() {
    let cycle18 = edgelist(18, &(0..18).map(|i| (i, (i + 1) % 18)).collect::<Vec<_>>());
    assert_eq!(certify(&cycle18, "P4", "1/5"), (0, "induced-copy".into()));

    let star12 = edgelist(13, &(1..13).map(|i| (0, i)).collect::<Vec<_>>());
    assert_eq!(certify(&star12, "P4", "1/5"), (1, "high-degree".into()));

    let triangles: Vec<(usize, usize)> =
        (0..6).flat_map(|t| [(3 * t, 3 * t + 1), (3 * t, 3 * t + 2), (3 * t + 1, 3 * t + 2)]).collect();
    assert_eq!(certify(&edgelist(18, &triangles), "P4", "1/5"), (2, "anticomplete-pair".into()));

    // an edge plus an isolated vertex: no P4, degrees below 3/2, and no
    // room for two disjoint sets of size two
    assert_eq!(certify(&edgelist(3, &[(0, 1)]), "P4", "1/2"), (3, "not-found".into()));
}

#[test]
fn gen_pipes_into_embed() {
    let (code, g6, _) = run(&["gen", "--model", "gnp", "--n", "14", "--p", "0.4"], "", &[]);
    assert_eq!(code, 0);
    let (code, stdout, _) = run(&["embed", "--graph", "-", "--pattern", "P3"], &g6, &[]);
    assert_eq!(code, 0, "G(14, 0.4) should contain an induced two-edge path");
    assert!(stdout.contains("image"));

    let (code, complete, _) = run(&["gen", "--model", "complete", "--n", "6"], "", &[]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["embed", "--graph", "-", "--pattern", "claw"], &complete, &[]);
    assert_eq!(code, 1, "a complete graph has no induced claw");
}

#[test]
fn experiment_writes_all_outputs_and_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = serde_json::json!({
        "kind": "epsilon-profile",
        "pattern": "P4",
        "n_lo": 10,
        "n_hi": 11,
        "p": 0.2,
        "eps": ["1/10"],
        "samples": 6,
        "seed": 3,
        "strategy": "excise"
    });
    let config_path = dir.path().join("config.json");
    std::fs::write(&config_path, config.to_string()).unwrap();

    let mut outputs = Vec::new();
    for (label, threads) in [("one", "1"), ("four", "4")] {
        let base = dir.path().join(label).join("run");
        let (code, _, stderr) = run(
            &["--output", base.to_str().unwrap(), "experiment", "--config", config_path.to_str().unwrap()],
            "",
            &[("PUREPAIR_THREADS", threads)],
        );
        assert_eq!(code, 0, "stderr: {}", stderr);
        let mut bundle = Vec::new();
        for ext in ["jsonl", "csv", "svg", "meta.json"] {
            let path = base.with_extension(ext);
            let body = std::fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("missing {}: {}", path.display(), e));
            assert!(!body.is_empty());
            bundle.push(body);
        }
        for line in bundle[0].lines() {
            serde_json::from_str::<serde_json::Value>(line).unwrap();
        }
        outputs.push(bundle);
    }
    assert_eq!(outputs[0], outputs[1], "outputs changed with the thread count");
}

#[test]
fn blockade_verdict_ops_exit_by_verdict() {
    // complete multipartite across six blocks of three: uniform and invariant
    let mut edges = Vec::new();
    for u in 0..18 {
        for v in (u + 1)..18 {
            if u / 3 != v / 3 {
                edges.push((u, v));
            }
        }
    }
    let g = purepair::graph::Graph::from_edges(18, &edges).unwrap();
    let blocks = (0..6)
        .map(|i| purepair::bits::VertexSet::from_iter(18, (3 * i)..(3 * i + 3)))
        .collect();
    let b = purepair::blockade::Blockade::new(&g, blocks).unwrap();
    let json = purepair::io::blockade_to_json(&g, &b);

    let (code, stdout, _) = run(&["blockade", "--file", "-", "--op", "uniform"], &json, &[]);
    assert_eq!(code, 0, "uniform verdict: {}", stdout);
    let (code, _, _) = run(&["blockade", "--file", "-", "--op", "invariant"], &json, &[]);
    assert_eq!(code, 0);

    // one cross-block edge among three singleton blocks: the edge tree
    // lands on exactly one support, so the trace is neither full nor empty
    let g2 = purepair::graph::Graph::from_edges(3, &[(0, 1)]).unwrap();
    let blocks2 = vec![
        purepair::bits::VertexSet::from_iter(3, [0]),
        purepair::bits::VertexSet::from_iter(3, [1]),
        purepair::bits::VertexSet::from_iter(3, [2]),
    ];
    let b2 = purepair::blockade::Blockade::new(&g2, blocks2).unwrap();
    let json2 = purepair::io::blockade_to_json(&g2, &b2);
    let (code, stdout, _) = run(&["blockade", "--file", "-", "--op", "uniform", "--tau", "2"], &json2, &[]);
    assert_eq!(code, 1, "expected a uniformity witness: {}", stdout);
}

#[test]
fn operational_errors_use_the_usage_exit() {
    let (code, _, stderr) = run(&["certify", "--graph", "-", "--pattern", "P4", "--eps", "0/1"], "C~", &[]);
    assert_eq!(code, 64);
    assert!(!stderr.is_empty());
    let (code, _, stderr) = run(&["embed", "--graph", "/nonexistent/g6", "--pattern", "P4"], "", &[]);
    assert_eq!(code, 64);
    assert!(!stderr.is_empty());
    // parse failures must not collide with verdict exit 2
    let (code, _, stderr) = run(&["anticomplete", "--graph", "-", "--bogus"], "", &[]);
    assert_eq!(code, 64);
    assert!(!stderr.is_empty());
    let (code, stdout, _) = run(&["--help"], "", &[]);
    assert_eq!(code, 0);
    assert!(stdout.contains("Usage"));
}
