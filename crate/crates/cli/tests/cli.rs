use std::path::Path;
use std::process::{Command, Output};

fn grecon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grecon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_corrupt_reconstruct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let h = dir.path().join("h.txt");
    let out = dir.path().join("fixed.txt");

    let o = grecon(&["gen", "--kind", "connected", "--n", "200", "--m", "400", "--seed", "3", "--out", s(&g)]);
    assert!(o.status.success(), "{o:?}");

    let o = grecon(&["corrupt", "--property", "conn", "--eps", "0.05", "--seed", "1", "--in", s(&g), "--out", s(&h)]);
    assert!(o.status.success(), "{o:?}");
    assert!(dir.path().join("h.txt.cert").exists());
    assert!(stdout(&o).contains("20 pairs"), "{}", stdout(&o));

    let o = grecon(&["reconstruct", "--property", "conn", "--eps", "0.05", "--in", s(&h), "--materialize", s(&out)]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("property holds: true"));

    let o = grecon(&["reconstruct", "--property", "modconn", "--eps", "0.05", "--c", "0.05", "--in", s(&h), "--query", "1", "2"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    assert!(first == "0" || first == "1");
    assert!(text.contains("queries: "));
}

#[test]
fn tester_and_tolerant_modes() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    assert!(grecon(&["gen", "--kind", "connected", "--n", "300", "--m", "600", "--out", s(&g)]).status.success());
    let o = grecon(&["test", "--mode", "tester", "--property", "conn", "--eps1", "0.1", "--trials", "5", "--in", s(&g)]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("accepted 5 of 5"));
    let o = grecon(&[
        "test", "--mode", "tolerant", "--property", "conn", "--eps1", "0.05", "--c", "0.02", "--trials", "3", "--in",
        s(&g),
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("of 3 trials"));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    let csv = dir.path().join("out.csv");
    std::fs::write(&cfg, "property = \"conn\"\nn = 100\nm = 200\neps = 0.05\ntrials = 4\n").unwrap();
    let o = grecon(&["bench", "--config", s(&cfg), "--out", s(&csv)]);
    assert!(o.status.success(), "{o:?}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 + 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.txt");
    // parameter error: unknown flag, bad value, infeasible constraint
    assert_eq!(grecon(&["gen", "--bogus"]).status.code(), Some(1));
    assert_eq!(grecon(&["gen", "--kind", "connected", "--n", "x", "--m", "4", "--out", "o"]).status.code(), Some(1));
    let g = dir.path().join("g.txt");
    assert!(grecon(&["gen", "--kind", "connected", "--n", "50", "--m", "100", "--out", s(&g)]).status.success());
    let o = grecon(&["reconstruct", "--property", "conn", "--eps", "0.001", "--in", s(&g), "--query", "1", "2"]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    // I/O error
    let o = grecon(&["reconstruct", "--property", "conn", "--eps", "0.1", "--in", s(&missing), "--query", "1", "2"]);
    assert_eq!(o.status.code(), Some(3));
    // verification failure: tampered certificate
    let h = dir.path().join("h.txt");
    assert!(grecon(&["corrupt", "--property", "conn", "--defects", "3", "--in", s(&g), "--out", s(&h)]).status.success());
    let cert = dir.path().join("h.txt.cert");
    let text = std::fs::read_to_string(&cert).unwrap();
    assert!(text.contains("distance_pairs = 3"));
    assert_eq!(grecon(&["check", "--in", s(&h)]).status.code(), Some(0));
    std::fs::write(&cert, text.replace("distance_pairs = 3", "distance_pairs = 2")).unwrap();
    assert_eq!(grecon(&["check", "--in", s(&h)]).status.code(), Some(2));
    // a graph that is not connected cannot be corrupted as if it were
    let o = grecon(&["corrupt", "--property", "conn", "--defects", "1", "--in", s(&h), "--out", s(&g)]);
    assert_eq!(o.status.code(), Some(1));
    // help is not an error
    assert_eq!(grecon(&["--help"]).status.code(), Some(0));
}
