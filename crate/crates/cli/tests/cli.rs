use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pcdec_cli::output::{read_results, RunManifest, CSV_HEADER};

fn pcdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcdec")).args(args).env_remove("PCDEC_WORKERS").output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = pcdec(args);
    assert!(out.status.success(), "pcdec {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

const SMALL: &str = r#"
[code]
m = 4
t = 2

[simulation]
iterations = 4
seed = 9
min_frame_errors = 20
max_frames = 400
algorithms = ["ibdd"]
ebno = [3.0]
"#;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn body(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

#[test]
fn minimal_config_writes_one_row_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let out = dir.path().join("r.csv");
    ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "-q"]);

    let text = fs::read_to_string(&out).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.lines().any(|l| l == CSV_HEADER.join(",")));
    let (comments, rows) = read_results(&out).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].algorithm, "ibdd");
    assert_eq!(rows[0].seed, 9);

    let manifest = RunManifest::read(&RunManifest::path_for(&out)).unwrap();
    assert!(comments.iter().any(|c| c.contains(&manifest.id)));
    assert_eq!(manifest.id, manifest.digest());
    assert!(manifest.finished_at.is_some());
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let mut bodies = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("w{workers}.csv"));
        ok(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--workers",
            workers,
            "--algorithms",
            "ibdd,igmdd-sr",
            "--ebno",
            "2.5,3.5",
            "-q",
            "--out",
            out.to_str().unwrap(),
            "--algorithm.igmdd-sr.w=[3.0]",
            "--simulation.transmission=\"random\"",
        ]);
        bodies.push(body(&out));
    }
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(bodies[0].lines().count(), 5);
}

#[test]
fn flags_override_configuration_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let out = dir.path().join("r.csv");
    ok(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "5",
        "--ebno",
        "2:0.5:3",
        "--max-frames",
        "50",
        "-q",
        "--out",
        out.to_str().unwrap(),
        "--simulation.iterations=2",
    ]);
    let (_, rows) = read_results(&out).unwrap();
    assert_eq!(rows.iter().map(|r| r.ebno_db).collect::<Vec<_>>(), vec![2.0, 2.5, 3.0]);
    assert!(rows.iter().all(|r| r.seed == 5 && r.iterations == 2 && r.frames <= 50));
}

#[test]
fn optimized_fragment_feeds_back_into_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "opt.toml",
        &format!("{SMALL}\n[optimize]\neval_frames = 30\nmax_sweeps = 1\ngrid = [1.0, 2.0]\n"),
    );
    let frag = dir.path().join("w.toml");
    ok(&[
        "optimize-w",
        "--config",
        cfg.to_str().unwrap(),
        "--algorithms",
        "ibdd-sr",
        "--ebno",
        "3.0",
        "-q",
        "--out",
        frag.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&frag).unwrap();
    assert!(text.contains("[algorithm.ibdd-sr]"));

    let out = dir.path().join("r.csv");
    ok(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--config",
        frag.to_str().unwrap(),
        "--algorithms",
        "ibdd-sr",
        "-q",
        "--out",
        out.to_str().unwrap(),
    ]);
    let (_, rows) = read_results(&out).unwrap();
    let w: Vec<f64> = rows[0].w.split(';').map(|v| v.parse().unwrap()).collect();
    assert_eq!(w.len(), 4);
    assert!(w.windows(2).all(|p| p[0] <= p[1]));
    let table: toml::Table = text.parse().unwrap();
    let expected: Vec<f64> =
        table["algorithm"]["ibdd-sr"]["w"].as_array().unwrap().iter().map(|v| v.as_float().unwrap()).collect();
    assert_eq!(w, expected);
}

#[test]
fn scaled_decoders_require_a_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let out = pcdec(&["simulate", "--config", cfg.to_str().unwrap(), "--algorithms", "igmdd-sr", "-q"]);
    assert!(!out.status.success());
}

#[test]
fn invalid_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = write(dir.path(), "bad.toml", &format!("{SMALL}\n[simulation.extra]\nx = 1\n"));
    assert!(!pcdec(&["simulate", "--config", bad_key.to_str().unwrap(), "-q"]).status.success());
    let cfg = write(dir.path(), "small.toml", SMALL);
    assert!(!pcdec(&["simulate", "--config", cfg.to_str().unwrap(), "--algorithms", "bogus", "-q"]).status.success());
    assert!(!pcdec(&["simulate", "--config", cfg.to_str().unwrap(), "--ebno", "3,2", "-q"]).status.success());
}

#[test]
fn report_handles_duplicates_and_missing_curves() {
    let dir = tempfile::tempdir().unwrap();
    let header = format!("# code n=16 k=7 rate=0.19140625\n{}\n", CSV_HEADER.join(","));
    let rows = "ibdd,3,4,100,800,50,3e-2,0.5,1,\nibdd,4,4,100,8,5,3e-4,0.05,1,\nibdd,5,4,100,1,1,3e-5,0.01,1,\n";
    let dup = rows.replace("ibdd,", "ad,");
    let csv = write(dir.path(), "dup.csv", &format!("{header}{rows}{dup}"));
    let out = ok(&["report", csv.to_str().unwrap(), "--target-ber", "1e-4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let ad = text.lines().find(|l| l.starts_with("ad ")).unwrap();
    assert!(ad.contains(" 0.00 "), "{text}");

    let short = write(dir.path(), "short.csv", &format!("{header}{rows}tpd,3,4,100,800,50,3e-2,0.5,1,\n"));
    let text = String::from_utf8(ok(&["report", short.to_str().unwrap()]).stdout).unwrap();
    assert!(text.lines().find(|l| l.starts_with("tpd ")).unwrap().contains("n/a"));

    let none = write(dir.path(), "none.csv", &format!("{header}{dup}"));
    assert!(!pcdec(&["report", none.to_str().unwrap()]).status.success());
}
