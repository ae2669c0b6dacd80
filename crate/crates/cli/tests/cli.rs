use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperdom"))
        .args(args)
        .current_dir(dir)
        .env_remove("HYPERDOM_MAX_DIM")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn theta_and_decompose() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["theta", "8"], d.path());
    assert_eq!(stdout(&o), "theta=4 xi=2 psi=2 xi'=1\n");

    let o = run(&["decompose", "5"], d.path());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(
        lines,
        [
            "m=0 S={2,4,5,6,7} target_n=39",
            "m=1 S={1,4,5,6,7} target_n=40",
            "m=2 S={4,5,6,7} target_n=41",
            "m=3 S={3,5,6,7} target_n=42"
        ]
    );

    let o = run(&["decompose", "3", "--m", "5"], d.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of range"));
}

#[test]
fn hamming_file_verifies_with_unit_multiplicity() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["construct", "hamming", "3", "--out", "q7.dom"], d.path());
    assert!(o.status.success());
    let text = std::fs::read_to_string(d.path().join("q7.dom")).unwrap();
    assert!(text.starts_with("dim=7 count=16\n"));
    assert_eq!(text.lines().count(), 17);

    let o = run(&["verify", "--dim", "7", "--in", "q7.dom", "--histogram"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("multiplicity 1: 128"));
}

#[test]
fn undominated_set_exits_one() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("one.dom"), "# just the origin\ndim=3 count=1\n000\n").unwrap();
    let o = run(&["verify", "--dim", "3", "--in", "one.dom"], d.path());
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("undominated_total=4"));
    assert_eq!(out.matches("undominated ").count(), 4);
}

#[test]
fn wedge_and_double_constructions() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["construct", "wedge", "--nhat", "3", "--m", "0", "--out", "n11"], d.path());
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("result=254"));
    let meta = std::fs::read_to_string(d.path().join("n11/meta.txt")).unwrap();
    assert!(meta.contains("S=1,3\n") && meta.contains("result_size=254\n") && meta.contains("target_n=11\n"));
    let o = run(&["verify", "--dim", "11", "--in", "n11/result.dom"], d.path());
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["gamma", "5"], d.path());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("gamma=7"));
    let body: Vec<&str> = lines.collect();
    std::fs::write(d.path().join("q5min.dom"), format!("dim=5 count=7\n{}\n", body.join("\n"))).unwrap();
    let o = run(&["construct", "double", "--in", "q5min.dom", "--out", "q11.dom.gz", "--verify"], d.path());
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).contains("size=224"));
    let o = run(&["verify", "--dim", "11", "--in", "q11.dom.gz"], d.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn files_round_trip_byte_for_byte() {
    let d = tempfile::tempdir().unwrap();
    // unsorted input with a comment re-serialises sorted; a second pass is a fixed point
    std::fs::write(d.path().join("a.dom"), "dim=3 count=2\n111\n# c\n000\n").unwrap();
    let o = run(&["construct", "double", "--in", "a.dom", "--out", "b.dom"], d.path());
    assert!(o.status.success());
    let first = std::fs::read(d.path().join("b.dom")).unwrap();
    run(&["construct", "double", "--in", "a.dom", "--out", "c.dom"], d.path());
    assert_eq!(first, std::fs::read(d.path().join("c.dom")).unwrap());
    let text = String::from_utf8(first).unwrap();
    let mut body: Vec<&str> = text.lines().skip(1).collect();
    let sorted = {
        let mut s = body.clone();
        s.sort();
        s
    };
    assert_eq!(body, sorted);
    body.dedup();
    assert_eq!(body.len(), 16);
}

#[test]
fn malformed_files_are_usage_errors() {
    let d = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("count.dom", "dim=3 count=2\n000\n"),
        ("len.dom", "dim=3 count=1\n0000\n"),
        ("dup.dom", "dim=3 count=2\n000\n000\n"),
        ("hdr.dom", "000\n"),
    ] {
        std::fs::write(d.path().join(name), text).unwrap();
        let o = run(&["verify", "--dim", "3", "--in", name], d.path());
        assert_eq!(o.status.code(), Some(2), "{name}");
    }
}

#[test]
fn refusals_exit_three() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("big.dom"), format!("dim=33 count=1\n{}\n", "0".repeat(33))).unwrap();
    let o = run(&["verify", "--dim", "33", "--in", "big.dom"], d.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bytes"));

    std::fs::write(d.path().join("mid.dom"), format!("dim=20 count=1\n{}\n", "0".repeat(20))).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hyperdom"))
        .args(["verify", "--dim", "20", "--in", "mid.dom"])
        .current_dir(d.path())
        .env("HYPERDOM_MAX_DIM", "12")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));

    assert_eq!(run(&["lambda", "9", "--exact"], d.path()).status.code(), Some(3));
    assert_eq!(run(&["gamma", "7"], d.path()).status.code(), Some(3));
    assert_eq!(run(&["bounds", "--max-n", "1024"], d.path()).status.code(), Some(3));
    assert_eq!(run(&["bogus"], d.path()).status.code(), Some(2));
}

#[test]
fn bounds_and_lambda_output() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["bounds", "--max-n", "33", "--format", "figure1"], d.path());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["12", "33/128", "Wille96"]));
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["19", "1/32", "9"]));
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["7*", "0"]));

    let o = run(&["bounds", "--max-n", "300", "--format", "csv"], d.path());
    let out = stdout(&o);
    assert!(out.starts_with("n,nhat,ncheck,chi_lower,chi_upper,gamma_upper,provenance\n"));
    assert!(out.contains("\n7,3,0,0,0,2^4,exact:sharp\n"));
    assert!(out.contains("\n278,8,23,2^-94,"));

    let o = run(&["bounds", "--max-n", "511", "--format", "grid"], d.path());
    assert!(stdout(&o).contains("# reference differs at n=143 "));

    let o = run(&["lambda", "5", "--exact"], d.path());
    assert_eq!(stdout(&o).lines().next(), Some("lower=4 exact=4"));

    // deterministic output
    let a = run(&["bounds", "--max-n", "200", "--format", "csv"], d.path());
    let b = run(&["bounds", "--max-n", "200", "--format", "csv"], d.path());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn custom_seed_file() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("seeds.txt"), "n=9 chi=1/32 sharp=1 cite=X\n").unwrap();
    let o = run(&["bounds", "--max-n", "20", "--seeds", "seeds.txt"], d.path());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["9*", "1/32", "X"]));
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["5", "0", "?"]));
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["12", "1/32", "9"]));
}
