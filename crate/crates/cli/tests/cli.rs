//! End-to-end tests of the spanlab binary: subcommand round-trips, exit
//! codes, and byte-identical CSV reruns.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const CSV_HEADER: &str = "family,n,pw,eps,seed,vertices,edges,spanner_edges,w_mst,\
w_spanner,lightness,max_tree_charge,charge_bound,stretch_ok,edge_path_ok,k_simple_ok,\
acyclic_ok,strong_ok,invariants_ok,status";

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn spanlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spanlab"))
        .args(args)
        .output()
        .expect("spawn spanlab")
}

#[track_caller]
fn expect_code(out: &Output, want: i32) {
    let got = out.status.code().unwrap_or(-1);
    assert_eq!(
        got,
        want,
        "exit {got}, want {want}\nstdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(path: &PathBuf) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_spanner_forest_verify_roundtrip() {
    let dir = tmp("roundtrip");
    let g = dir.join("g.txt");
    let d = dir.join("d.txt");
    let s = dir.join("s.txt");
    let scheme = dir.join("scheme.txt");
    let audit = dir.join("audit.jsonl");

    let gen = spanlab(&[
        "pathdec", "gen", "--n", "12", "--pw", "3", "--seed", "7", "--out-graph", p(&g),
        "--out-dec", p(&d),
    ]);
    expect_code(&gen, 0);

    expect_code(&spanlab(&["pathdec", "validate", "--graph", p(&g), "--dec", p(&d)]), 0);

    let build = spanlab(&["spanner", "build", "--eps", "1/2", "--in", p(&g), "--out", p(&s)]);
    expect_code(&build, 0);
    assert!(stdout(&build).contains("stretch ok"), "{}", stdout(&build));
    assert!(
        fs::read_to_string(&s).unwrap().starts_with("# eps 1/2"),
        "spanner file should carry its eps header"
    );

    let forest = spanlab(&[
        "forest", "build", "--graph", p(&g), "--dec", p(&d), "--eps", "1/2", "--out",
        p(&scheme), "--audit", p(&audit), "--check-bags",
    ]);
    expect_code(&forest, 0);
    let text = stdout(&forest);
    assert!(text.contains("invariants ok"), "{text}");
    assert!(text.contains("strong ok"), "{text}");
    assert!(text.contains("lightness: w(S)"), "{text}");

    // every audit line is a JSON object with the documented fields
    let audit_text = fs::read_to_string(&audit).unwrap();
    assert!(!audit_text.trim().is_empty());
    for line in audit_text.lines() {
        assert!(line.starts_with('{') && line.ends_with('}'), "not JSONL: {line}");
        for field in ["\"edge\"", "\"triangles\"", "\"pseudo_triangles\"", "\"total_charges\""] {
            assert!(line.contains(field), "missing {field} in {line}");
        }
    }

    // the emitted scheme verifies against the independently built spanner
    // (the greedy construction is deterministic, so the files agree);
    // k = 2(pw-2) + 4 pw^2 = 38 at pw 3
    let verify = spanlab(&[
        "charge", "verify", "--graph", p(&s), "--scheme", p(&scheme), "--k", "38",
    ]);
    expect_code(&verify, 0);

    // k = 0 cannot hold for any scheme that charges a tree edge
    let reject = spanlab(&[
        "charge", "verify", "--graph", p(&s), "--scheme", p(&scheme), "--k", "0",
    ]);
    expect_code(&reject, 1);
}

#[test]
fn smooth_accepts_padded_decompositions() {
    let dir = tmp("smooth");
    let g = dir.join("g.txt");
    let d = dir.join("d.txt");
    let padded = dir.join("padded.txt");
    let sm = dir.join("smooth.txt");

    expect_code(
        &spanlab(&[
            "pathdec", "gen", "--n", "9", "--pw", "2", "--seed", "3", "--out-graph", p(&g),
            "--out-dec", p(&d),
        ]),
        0,
    );

    // duplicating a bag keeps the decomposition valid but not smooth
    let lines: Vec<String> = fs::read_to_string(&d)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    let mut dup = lines.clone();
    dup.insert(1, lines[0].clone());
    fs::write(&padded, dup.join("\n") + "\n").unwrap();

    expect_code(&spanlab(&["pathdec", "validate", "--graph", p(&g), "--dec", p(&padded)]), 0);
    expect_code(
        &spanlab(&["pathdec", "smooth", "--graph", p(&g), "--dec", p(&padded), "--out", p(&sm)]),
        0,
    );
    expect_code(&spanlab(&["pathdec", "validate", "--graph", p(&g), "--dec", p(&sm)]), 0);
    assert_eq!(fs::read_to_string(&sm).unwrap(), fs::read_to_string(&d).unwrap());
}

#[test]
fn outerplanar_scheme_verifies_at_k1() {
    let dir = tmp("outerplanar");
    let g = dir.join("g.txt");
    let cs = dir.join("scheme.txt");
    // square 0-1-2-3 with one chord
    fs::write(&g, "4 5\n0 1 1\n1 2 1\n2 3 1\n0 3 1\n0 2 1\n").unwrap();

    expect_code(&spanlab(&["charge", "outerplanar", "--graph", p(&g), "--out", p(&cs)]), 0);
    expect_code(
        &spanlab(&[
            "charge", "verify", "--graph", p(&g), "--scheme", p(&cs), "--k", "1", "--eps", "1/10",
        ]),
        0,
    );

    // an explicit designated edge is honored
    let des = spanlab(&["charge", "outerplanar", "--graph", p(&g), "--designated", "0,1"]);
    expect_code(&des, 0);
    assert!(!stdout(&des).contains("tree 0 1"), "designated edge must not be a tree edge");
}

#[test]
fn strengthen_splices_virtual_edges() {
    let dir = tmp("strengthen");
    let completed = dir.join("completed.txt");
    let real = dir.join("real.txt");
    let weak = dir.join("weak.txt");
    let virtuals = dir.join("virtual.txt");
    let strong = dir.join("strong.txt");

    // path 0-1-2-3 plus a virtual edge (0,2) at its path distance and a
    // real non-tree edge (0,3)
    fs::write(&completed, "4 5\n0 1 1\n1 2 1\n2 3 1\n0 2 2\n0 3 2\n").unwrap();
    fs::write(&real, "4 4\n0 1 1\n1 2 1\n2 3 1\n0 3 2\n").unwrap();
    fs::write(
        &weak,
        "tree 0 1\ntree 1 2\ntree 2 3\n0 3 : 0 2 2 3\n0 2 : 0 1 1 2\n",
    )
    .unwrap();
    fs::write(&virtuals, "0 2\n").unwrap();

    expect_code(
        &spanlab(&[
            "charge", "strengthen", "--graph", p(&completed), "--scheme", p(&weak),
            "--virtual", p(&virtuals), "--out", p(&strong),
        ]),
        0,
    );
    let text = fs::read_to_string(&strong).unwrap();
    assert!(!text.contains("0 2 :"), "virtual edge still charged:\n{text}");

    // spliced scheme is 1-simple and strong on the real graph at eps = 1/2
    expect_code(
        &spanlab(&[
            "charge", "verify", "--graph", p(&real), "--scheme", p(&strong), "--k", "1",
            "--eps", "1/2",
        ]),
        0,
    );
}

#[test]
fn sweep_rerun_is_byte_identical_and_reports() {
    let dir = tmp("sweep");
    let cfg = dir.join("cfg.toml");
    let csv = dir.join("out.csv");
    fs::write(
        &cfg,
        format!(
            r#"
family = "kpath"
n_min = 6
n_max = 8
n_step = 2
pw_min = 2
pw_max = 2
eps = ["1/2", "1"]
seeds = [0, 1]
weight_hi = 50
out = "{}"
"#,
            csv.display()
        ),
    )
    .unwrap();

    let first = spanlab(&["run", "--config", p(&cfg)]);
    expect_code(&first, 0);
    assert!(stdout(&first).contains("(0 failed)"), "{}", stdout(&first));
    let bytes1 = fs::read(&csv).unwrap();

    expect_code(&spanlab(&["run", "--config", p(&cfg)]), 0);
    let bytes2 = fs::read(&csv).unwrap();
    assert_eq!(bytes1, bytes2, "rerun changed the CSV");

    let text = String::from_utf8(bytes1).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2, "one row per (n, seed, eps)");
    assert!(text.lines().skip(1).all(|l| l.ends_with(",ok")));

    let report = spanlab(&["report", "--in", p(&csv)]);
    expect_code(&report, 0);
    let table = stdout(&report);
    assert!(table.contains("max_lightness"), "{table}");
    assert!(table.contains("kpath"), "{table}");
}

#[test]
fn input_errors_exit_2() {
    let dir = tmp("errors");

    // missing file
    let missing = spanlab(&[
        "spanner", "build", "--eps", "1/2", "--in", p(&dir.join("nope.txt")), "--out",
        p(&dir.join("x.txt")),
    ]);
    expect_code(&missing, 2);

    // malformed graph, with the offending line reported
    let bad = dir.join("bad.txt");
    fs::write(&bad, "hello\n").unwrap();
    let malformed = spanlab(&[
        "spanner", "build", "--eps", "1/2", "--in", p(&bad), "--out", p(&dir.join("x.txt")),
    ]);
    expect_code(&malformed, 2);
    assert!(stderr(&malformed).contains("line 1"), "{}", stderr(&malformed));

    // unparseable eps
    let g = dir.join("g.txt");
    fs::write(&g, "2 1\n0 1 1\n").unwrap();
    let bad_eps = spanlab(&[
        "spanner", "build", "--eps", "abc", "--in", p(&g), "--out", p(&dir.join("x.txt")),
    ]);
    expect_code(&bad_eps, 2);

    // config that fails validation
    let cfg = dir.join("cfg.toml");
    fs::write(&cfg, "family = \"nosuch\"\nn_min = 3\nn_max = 3\neps = [\"1\"]\nseeds = [0]\nout = \"x.csv\"\n").unwrap();
    expect_code(&spanlab(&["run", "--config", p(&cfg)]), 2);

    // malformed CSV handed to report
    let csv = dir.join("bad.csv");
    fs::write(&csv, "not,a,sweep\n1,2,3\n").unwrap();
    let report = spanlab(&["report", "--in", p(&csv)]);
    expect_code(&report, 2);
    assert!(stderr(&report).contains("line 1"), "{}", stderr(&report));
}
