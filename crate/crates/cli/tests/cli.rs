use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sfdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfdt"))
        .args(args)
        .output()
        .expect("sfdt runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn mobius_ladder_has_no_transversal() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = path(dir.path(), "mobius4");
    assert!(sfdt(&[
        "gen",
        "--family",
        "mobius-ladder",
        "--n",
        "4",
        "--out",
        &prefix
    ])
    .status
    .success());
    let cover = format!("{prefix}.cover");

    let o = sfdt(&["solve", "--cover", &cover]);
    assert_eq!(stdout(&o), "NONE\n");
    assert_eq!(o.status.code(), Some(1));

    let o = sfdt(&["solve", "--cover", &cover, "--oracle"]);
    assert_eq!(stdout(&o), "NONE\n");

    let o = sfdt(&["constructible", "--cover", &cover]);
    assert_eq!(stdout(&o), "BUILDING mobius-ladder\n");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn solve_prints_a_checkable_transversal() {
    let dir = tempfile::tempdir().unwrap();
    let cover = path(dir.path(), "c.cover");
    fs::write(&cover, "kappa 2\nvertices 3\nedge 0 1\nedge 1 2\nmatch 0 1 1 1\nmatch 1 2 1 1\nf 0 1 1\nf 1 1 1\nf 1 2 1\nf 2 1 1\n")
        .unwrap();
    let o = sfdt(&["solve", "--cover", &cover]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let choices: Vec<&str> = text
        .trim()
        .strip_prefix("SFDT ")
        .expect("SFDT line")
        .split(' ')
        .collect();
    assert_eq!(choices.len(), 3);
    assert!(choices.iter().all(|c| c.contains(':')));

    let o = sfdt(&["constructible", "--cover", &cover]);
    assert_eq!(stdout(&o), "NO\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn glued_cover_is_constructible_not_building() {
    let dir = tempfile::tempdir().unwrap();
    let cover = path(dir.path(), "bowtie.cover");
    // Two triangles sharing vertex 0, one living on slot 1 and the other on
    // slot 2, so the kernel is two disjoint triangles.
    let text = "kappa 2\nvertices 5\n\
                edge 0 1\nedge 1 2\nedge 0 2\nedge 0 3\nedge 3 4\nedge 0 4\n\
                match 0 1 1 1\nmatch 1 2 1 1\nmatch 0 2 1 1\nmatch 0 3 2 2\nmatch 3 4 2 2\nmatch 0 4 2 2\n\
                f 0 1 2\nf 0 2 2\nf 1 1 2\nf 2 1 2\nf 3 2 2\nf 4 2 2\n";
    fs::write(&cover, text).unwrap();
    let o = sfdt(&["constructible", "--cover", &cover]);
    assert_eq!(stdout(&o), "CONSTRUCTIBLE\n");
    assert_eq!(sfdt(&["solve", "--cover", &cover]).status.code(), Some(1));
}

#[test]
fn cap_in_circulant() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "c6circ.g6");
    fs::write(&g, "EznW\n").unwrap();
    let o = sfdt(&["detect", "--graph", &g, "--cap", "3", "6", "--deg4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "CAP length 3 cycle 0 1 2 apex 3\n");
}

#[test]
fn detect_patterns_and_families() {
    let dir = tempfile::tempdir().unwrap();
    let cap = path(dir.path(), "cap5.edges");
    let o = sfdt(&["gen", "--family", "cap", "--k", "5"]);
    fs::write(&cap, &o.stdout).unwrap();

    let o = sfdt(&["detect", "--graph", &cap, "--cap", "5", "5"]);
    assert_eq!(stdout(&o), "CAP length 5 cycle 0 1 2 3 4 apex 5\n");
    let o = sfdt(&["detect", "--graph", &cap, "--cap", "5", "5", "--deg4"]);
    assert_eq!(stdout(&o), "NONE\n");
    assert_eq!(o.status.code(), Some(1));

    let o = sfdt(&["detect", "--graph", &cap, "--family", "no-4-cycles"]);
    assert_eq!(stdout(&o), "no-4-cycles holds\n");
    let o = sfdt(&["detect", "--graph", &cap, "--family", "no-5-cycles"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("no-5-cycles fails"));

    let tri = path(dir.path(), "triangle.edges");
    fs::write(&tri, "3 3\n0 1\n1 2\n0 2\n").unwrap();
    let o = sfdt(&["detect", "--graph", &cap, "--pattern-file", &tri]);
    assert_eq!(stdout(&o), "FOUND triangle 0:0 1:1 2:5\n");

    fs::write(&tri, "3 3\n0 1\n1 2\n0 2\ndeg 2 4\n").unwrap();
    let o = sfdt(&["detect", "--graph", &cap, "--pattern-file", &tri]);
    assert_eq!(stdout(&o), "NONE\n");
}

#[test]
fn torus_discharge_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = path(dir.path(), "t");
    assert!(sfdt(&[
        "gen",
        "--family",
        "torus-grid",
        "--m",
        "4",
        "--n",
        "4",
        "--out",
        &prefix
    ])
    .status
    .success());
    let (edges, rot) = (format!("{prefix}.edges"), format!("{prefix}.rot"));
    for scheme in ["mlone", "mltwo", "mlthree"] {
        let o = sfdt(&[
            "discharge",
            "--graph",
            &edges,
            "--rotation",
            &rot,
            "--scheme",
            scheme,
        ]);
        assert_eq!(o.status.code(), Some(0), "{scheme}");
        let text = stdout(&o);
        assert!(
            text.contains("SUM_INITIAL 0/1 SUM_FINAL 0/1 NEGATIVES 0"),
            "{text}"
        );
    }
}

#[test]
fn planar_discharge_summary() {
    let dir = tempfile::tempdir().unwrap();
    let edges = path(dir.path(), "k4.edges");
    let rot = path(dir.path(), "k4.rot");
    fs::write(&edges, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    fs::write(
        &rot,
        "vertices 4\nrot 0 1 2 3\nrot 1 0 3 2\nrot 2 0 1 3\nrot 3 0 2 1\n",
    )
    .unwrap();
    let o = sfdt(&[
        "discharge",
        "--graph",
        &edges,
        "--rotation",
        &rot,
        "--scheme",
        "mlone",
    ]);
    assert!(
        stdout(&o).contains("SUM_INITIAL -8/1 SUM_FINAL -8/1"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn verify_exit_codes() {
    let o = sfdt(&["verify", "--suite", "3degenerate", "--nmax", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("violations 0\n"));
    let o = sfdt(&[
        "verify",
        "--suite",
        "dp4",
        "--nmax",
        "5",
        "--family",
        "no4cycles-planar",
        "--samples",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_and_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = path(dir.path(), "missing.cover");
    let bad = path(dir.path(), "bad.cover");
    fs::write(&bad, "kappa 2\nvertices 2\nmatch 0 1 1 1\n").unwrap();
    for args in [
        vec!["solve", "--cover", missing.as_str()],
        vec!["solve", "--cover", bad.as_str()],
        vec!["verify", "--suite", "nonsense"],
        vec!["verify", "--suite", "3degenerate", "--nmax", "12"],
        vec!["gen", "--family", "nonsense"],
        vec!["detect", "--graph", missing.as_str()],
    ] {
        let o = sfdt(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}
