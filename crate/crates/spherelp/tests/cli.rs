use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spherelp::docs::SeriesDoc;

fn spherelp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spherelp"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run spherelp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn sharp_field(text: &str) -> String {
    let line = text.lines().find(|l| l.starts_with("sharp: ")).expect("sharp line");
    line.to_string()
}

#[test]
fn construct_prints_documented_sharp_values() {
    let dir = tempfile::tempdir().unwrap();
    for (args, want) in [
        (vec!["construct", "onedim", "--m", "3"], "sharp: 1.000000"),
        (vec!["construct", "hex2"], "sharp: 1.154701"),
        (vec!["construct", "cubic3"], "sharp: 1.414214"),
    ] {
        let o = spherelp(dir.path(), &args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(stdout(&o).contains(want), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn construct_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["construct", "onedim"],
        vec!["construct", "onedim", "--m", "2"],
        vec!["construct", "hex2", "--m", "3"],
        vec!["construct", "dodecahedron"],
        vec!["construct"],
        vec!["frobnicate"],
    ] {
        assert_eq!(spherelp(dir.path(), &args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn construct_verify_bound_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = spherelp(dir.path(), &["construct", "hex2", "--out", "hex.json"]);
    assert_eq!(c.status.code(), Some(0));
    let doc: SeriesDoc = serde_json::from_str(&fs::read_to_string(dir.path().join("hex.json")).unwrap()).unwrap();
    let meta = doc.meta.expect("meta");
    assert_eq!(meta.command, "construct");
    assert_eq!(meta.version, env!("CARGO_PKG_VERSION"));

    let v = spherelp(dir.path(), &["verify", "hex.json", "--report", "r.json", "--dump", "s.csv", "--dump-per-axis", "8"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["meta"]["seed"], 0);
    let dump = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(dump.starts_with("# spherelp"));
    assert!(dump.contains("x1,x2,value"));
    assert_eq!(dump.lines().filter(|l| !l.starts_with('#')).count(), 1 + 64);

    let runs: Vec<String> = (0..2)
        .map(|_| {
            let b = spherelp(dir.path(), &["bound", "hex.json", "--csv", "b.csv"]);
            assert_eq!(b.status.code(), Some(0));
            sharp_field(&stdout(&b))
        })
        .collect();
    assert_eq!(runs[0], sharp_field(&stdout(&c)));
    assert_eq!(runs[0], runs[1]);
    let csv = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(csv.contains("n,m,sharp,delta,Delta,flag"));
    assert!(csv.contains("2,2,1.1547005383792517,"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let constant = r#"{"lattice": {"n": 1, "m": 3, "basis": [[1.0]]}, "terms": [{"t": [0.0], "c": 1.0}]}"#;
    fs::write(dir.path().join("one.json"), constant).unwrap();
    assert_eq!(spherelp(dir.path(), &["verify", "one.json"]).status.code(), Some(1));

    fs::write(dir.path().join("cut.json"), &constant[..40]).unwrap();
    assert_eq!(spherelp(dir.path(), &["verify", "cut.json"]).status.code(), Some(2));
    assert_eq!(spherelp(dir.path(), &["verify", "missing.json"]).status.code(), Some(2));

    // frequency 0.4 is not in the dual of 3Z
    let off = r#"{"lattice": {"n": 1, "m": 3, "basis": [[1.0]]}, "terms": [{"t": [0.0], "c": 1.0}, {"t": [0.4], "c": 1.0}]}"#;
    fs::write(dir.path().join("off.json"), off).unwrap();
    let o = spherelp(dir.path(), &["verify", "off.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("membership: FAIL"));
}

#[test]
fn search_hex_reaches_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = spherelp(
        dir.path(),
        &["search", "--lattice", "hex", "--m", "2", "--max-freq", "auto", "--grid", "0.01", "--rounds", "10", "--out", "sol.json"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("objective: 4.000000"));
    let v = spherelp(dir.path(), &["verify", "sol.json"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn search_accepts_lattice_documents() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("z.json"), r#"{"n": 1, "m": 4, "basis": [[1.0]]}"#).unwrap();
    let o = spherelp(
        dir.path(),
        &["search", "--lattice", "z.json", "--max-freq", "0.7", "--grid", "0.2", "--rounds", "20", "--cert-grid", "1e-4", "--tol", "1e-3"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("objective: 4.000000"));
    let bad = spherelp(dir.path(), &["search", "--lattice", "z.json", "--max-freq", "-1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn periodize_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = spherelp(
        dir.path(),
        &["periodize", "triangle", "--m", "2", "--max-index", "10000", "--ms", "2,3,4,5", "--csv", "tri.csv"],
    );
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().find(|l| l.starts_with("poisson residual")).unwrap().to_string();
    let residual: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!(residual <= 1e-3, "{line}");

    let o = spherelp(dir.path(), &["periodize", "ce_h", "--ms", "6,7", "--csv", "ce.csv", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(dir.path().join("ce.csv")).unwrap().contains("# seed: 4"));
    assert_eq!(spherelp(dir.path(), &["periodize", "ce_h", "--out", "x.json"]).status.code(), Some(2));
    assert_eq!(spherelp(dir.path(), &["periodize", "gaussian"]).status.code(), Some(2));

    let r = spherelp(dir.path(), &["report", "tri.csv", "ce.csv", "--out", "sum.csv", "--plot", "plot.dat"]);
    assert_eq!(r.status.code(), Some(0));
    let table = stdout(&r);
    let last = table.lines().last().unwrap();
    assert!(last.contains("liminf") && last.contains("sequence-liminf"), "{table}");
    assert!(last.contains("m = 2..7"));
    let plot = fs::read_to_string(dir.path().join("plot.dat")).unwrap();
    assert!(plot.contains("# m sharp"));
    assert_eq!(plot.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count(), 6);
    let summary = fs::read_to_string(dir.path().join("sum.csv")).unwrap();
    assert!(summary.lines().last().unwrap().ends_with("sequence-liminf"));

    fs::write(dir.path().join("empty.csv"), "n,m,sharp,delta,Delta,flag\n").unwrap();
    assert_eq!(spherelp(dir.path(), &["report", "empty.csv"]).status.code(), Some(2));
}
