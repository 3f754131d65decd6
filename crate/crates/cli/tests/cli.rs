use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_p2flis"));
    c.env_remove("P2FLIS_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn kinds(json: &str) -> (usize, usize) {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    let tiles = v["tiles"].as_array().unwrap();
    let k = tiles.iter().filter(|t| t["kind"] == "kite").count();
    (k, tiles.len() - k)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_counts_follow_substitution() {
    // (K, D) -> (2K + D, K + D) per step from five kites, exact while no
    // boundary half-tile is left unpaired
    assert_eq!(kinds(&stdout(&run(&["generate", "--seed", "sun", "--depth", "0"]))), (5, 0));
    assert_eq!(kinds(&stdout(&run(&["generate", "--seed", "sun", "--depth", "1"]))), (10, 5));
    for depth in 2..=3 {
        let o = run(&["generate", "--seed", "sun", "--depth", &depth.to_string()]);
        assert!(o.status.success());
        let lib = p2flis::tiling::generate::<i64>(p2flis::tiling::VertexConfig::Sun, depth).unwrap();
        assert_eq!(kinds(&stdout(&o)), lib.counts());
    }
    let o = run(&["generate", "--seed", "star", "--depth", "0"]);
    assert_eq!(kinds(&stdout(&o)), (0, 5));
}

#[test]
fn usage_and_runtime_exit_codes() {
    assert_eq!(run(&["generate", "--seed", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["formula"]).status.code(), Some(2));
    assert_eq!(run(&["render", "--patch", "/nonexistent/p.json"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = \"sun\"\ndepth = 2\n").unwrap();
    let o = run(&["--config", path_str(&cfg), "generate"]);
    assert_eq!(kinds(&stdout(&o)), (25, 10));
    let o = run(&["--config", path_str(&cfg), "generate", "--depth", "1"]);
    assert_eq!(kinds(&stdout(&o)), (10, 5));
    std::fs::write(&cfg, "colour = \"red\"\n").unwrap();
    assert_eq!(run(&["--config", path_str(&cfg), "generate"]).status.code(), Some(2));
}

#[test]
fn leaf_table_base_range() {
    let o = run(&["leaf-table", "--seed", "sun", "--depth", "6", "--n-min", "2", "--n-max", "18"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,L,nodes,seconds,witness_id,status"));
    let mut seen = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let n: usize = f[0].parse().unwrap();
        let l: usize = f[1].parse().unwrap();
        assert_eq!(l, n / 2 + 1, "{line}");
        assert_eq!(f[5], "ok");
        if n == 12 {
            assert_eq!(l, 7);
        }
        seen += 1;
    }
    assert_eq!(seen, 17);
}

#[test]
fn leaf_table_margin_error_row() {
    let o = run(&["leaf-table", "--depth", "4", "--margin", "0", "--n-max", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().skip(1).all(|l| l.contains("margin_too_small")));
}

#[test]
fn poset_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("poset.json");
    let o = run(&["poset", "--seed", "sun", "--depth", "6", "--out", path_str(&out)]);
    let text = stdout(&o);
    assert!(text.contains("rows 2 4 3 6 3 6 3 6 0"), "{text}");
    assert!(text.contains("caterpillar_check true"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["rows"]["1"].as_array().unwrap().len(), 2);
}

#[test]
fn caterpillar_reports() {
    let o = run(&["caterpillar", "--n", "116"]);
    let text = stdout(&o);
    assert!(text.starts_with("n 116 n1 56 n2 6 n3 54 formula 56 PASS"), "{text}");
    assert!(text.contains("54"));
    let o = run(&["caterpillar", "--n", "14"]);
    assert!(stdout(&o).starts_with("n 14 n1 8 n2 0 n3 6 formula 8 PASS"));
    let o = run(&["caterpillar", "--n", "1"]);
    assert!(stdout(&o).starts_with("n 1 n1 0 "));
    assert!(stdout(&o).contains("PASS"));
    let o = run(&["caterpillar", "--n", "40", "--walk"]);
    assert!(stdout(&o).contains("n1 20 ") && stdout(&o).contains("PASS"));
}

#[test]
fn render_witness_and_plain() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let p = dir.path().join("p.json");
    let o = run(&["caterpillar", "--n", "14", "--out", path_str(&w), "--patch-out", path_str(&p)]);
    assert!(o.status.success());
    let svg = stdout(&run(&["render", "--patch", path_str(&p), "--witness", path_str(&w)]));
    assert_eq!(svg.matches(r#"class="derived""#).count(), 6);
    assert_eq!(svg.matches("witness deg3 kite").count(), 6);
    assert!(svg.starts_with("<svg"));
    let again = stdout(&run(&["render", "--patch", path_str(&p), "--witness", path_str(&w)]));
    assert_eq!(svg, again);
    let plain = stdout(&run(&["render", "--patch", path_str(&p)]));
    assert!(!plain.contains("witness") && !plain.contains("derived"));
}

#[test]
fn dual_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("ace");
    let o = run(&["dual", "--seed", "ace", "--depth", "0", "--out", path_str(&prefix)]);
    assert!(o.status.success());
    let edges = std::fs::read_to_string(dir.path().join("ace.edges")).unwrap();
    assert_eq!(edges, "0 1\n0 2\n1 2\n");
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ace.tiles.json")).unwrap()).unwrap();
    assert_eq!(side.as_array().unwrap().len(), 3);
}

#[test]
fn formula_and_threads_env() {
    let o = bin().args(["formula", "--n", "116", "--check", "1000"]).env("P2FLIS_THREADS", "2").output().unwrap();
    let text = stdout(&o);
    assert!(text.contains("n 116 recursive 56 closed 56"));
    assert!(text.contains("first disagrees at n = 51"));
    assert!(o.status.success());
}

#[test]
fn patch_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    run(&["generate", "--seed", "jack", "--depth", "3", "--out", path_str(&p)]);
    let again = stdout(&run(&["generate", "--patch", path_str(&p)]));
    assert_eq!(again, std::fs::read_to_string(&p).unwrap());
}
