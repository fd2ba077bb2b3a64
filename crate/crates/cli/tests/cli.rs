use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn curveflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curveflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path
}

const CIRCLE: &str = r#"
monitors = ["avoidance", "sphericity"]

[curve]
kind = "circle"
samples = 64

[flow]
stop_max_time = 0.1
record_every = 20

[dump]
snapshot_every = 5
"#;

const RANDOM: &str = r#"
seed = 11
monitors = ["avoidance"]

[curve]
kind = "random_spherical"
samples = 96

[flow]
stop_max_time = 0.02
record_every = 25
"#;

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let k = lines.next().unwrap().split(',').position(|h| h == name).expect("column present");
    lines.map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

#[test]
fn evolve_circle_writes_artifacts() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), CIRCLE);
    let out = curveflow(&["evolve", "--config", cfg.to_str().unwrap(), "--svg"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("time horizon reached"));

    let run = dir.path().join("out");
    let metrics = fs::read_to_string(run.join("metrics.csv")).unwrap();
    assert!(metrics.lines().next().unwrap().contains("min_f_D"));
    let (t, len) = (column(&metrics, "t"), column(&metrics, "length"));
    let tf = *t.last().unwrap();
    assert!((tf - 0.1).abs() < 1e-12);
    // Polygon perimeter sits just below the circle's.
    let exact = std::f64::consts::TAU * (1.0 - 2.0 * tf).sqrt();
    assert!((len.last().unwrap() - exact).abs() / exact < 2e-3);

    let report = fs::read_to_string(run.join("report.toml")).unwrap();
    assert!(report.contains("stop = \"max_time\""));
    assert!(report.contains("topology_checks = true"));
    let names: Vec<String> = fs::read_dir(&run)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().filter(|n| n.starts_with("snap_")).count() >= 2);
    assert!(names.iter().any(|n| n.ends_with(".svg")));
}

#[test]
fn no_topology_checks_drops_quadratic_monitors() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), CIRCLE);
    let out = curveflow(&["evolve", "--config", cfg.to_str().unwrap(), "--no-topology-checks"]);
    assert_eq!(code(&out), 0);
    let header = fs::read_to_string(dir.path().join("out/metrics.csv")).unwrap();
    let header = header.lines().next().unwrap();
    assert!(!header.contains("min_f_D"));
    assert!(header.contains("sphere_rms"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), RANDOM);
    let cfg = cfg.to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(code(&curveflow(&["evolve", "--config", cfg, "--out", a.to_str().unwrap()])), 0);
    assert_eq!(code(&curveflow(&["evolve", "--config", cfg, "--out", b.to_str().unwrap()])), 0);
    let read = |d: &Path| fs::read(d.join("metrics.csv")).unwrap();
    assert_eq!(read(&a), read(&b));

    let c = dir.path().join("c");
    let out = curveflow(&["evolve", "--config", cfg, "--out", c.to_str().unwrap(), "--seed", "12"]);
    assert_eq!(code(&out), 0);
    assert_ne!(read(&a), read(&c));
}

#[test]
fn chordfield_dump() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), RANDOM);
    let out = curveflow(&["evolve", "--config", cfg.to_str().unwrap(), "--dump-chordfield"]);
    assert_eq!(code(&out), 0);
    let dumps: Vec<_> = fs::read_dir(dir.path().join("out"))
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().to_string_lossy().into_owned();
            name.starts_with("chordfield_").then_some(name)
        })
        .collect();
    assert_eq!(dumps.len(), 2);
}

#[test]
fn configuration_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.toml");
    let out = curveflow(&["evolve", "--config", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let cfg = write_config(dir.path(), "[curve]\nkind = \"circle\"\nsamplez = 8\n");
    assert_eq!(code(&curveflow(&["evolve", "--config", cfg.to_str().unwrap()])), 2);

    let cfg = write_config(dir.path(), "monitors = [\"telepathy\"]\n[curve]\nkind = \"circle\"\n");
    assert_eq!(code(&curveflow(&["evolve", "--config", cfg.to_str().unwrap()])), 2);

    assert_eq!(code(&curveflow(&["verify", "no-such-suite"])), 2);
    assert_eq!(code(&curveflow(&["frobnicate"])), 2);
}

#[test]
fn sweep_reports_cells_and_orders() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), CIRCLE);
    let cfg = cfg.to_str().unwrap();
    assert_eq!(code(&curveflow(&["sweep", "--config", cfg])), 2);
    assert_eq!(code(&curveflow(&["sweep", "--config", cfg, "--vary", "wobble=1,2"])), 2);

    let out = curveflow(&["sweep", "--config", cfg, "--no-topology-checks", "--vary", "samples=32,64"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("samples,32,64"));
    let sweep = dir.path().join("out");
    assert!(sweep.join("sweep.csv").exists());
    assert!(sweep.join("cell_001/metrics.csv").exists());
    let conv = fs::read_to_string(sweep.join("convergence.csv")).unwrap();
    let order: f64 = conv.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((order - 2.0).abs() < 0.3, "order {order}");
}

#[test]
fn list_generators_names_every_kind() {
    let out = curveflow(&["list-generators"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for kind in ["circle", "baseball", "example1", "random_spherical", "remark4d"] {
        assert!(text.lines().any(|l| l.starts_with(kind)), "{kind} missing");
    }
}

#[test]
fn quick_verify_prints_one_line_per_check() {
    let out = curveflow(&["verify", "frenet", "--quick"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = curveflow_cli::config::RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            cfg.validate().unwrap();
            assert!(!cfg.initial_curves().unwrap().is_empty());
            seen += 1;
        }
    }
    assert!(seen >= 5);
}

#[test]
fn seed_sweep_has_no_avoidance_violations() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), RANDOM);
    let out = curveflow(&["sweep", "--config", cfg.to_str().unwrap(), "--vary", "seed=1,2,3,4,5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == "violations").unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.split(',').nth(k) == Some("0")));
}
