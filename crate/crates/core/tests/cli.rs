use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_operanoid"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env("OPERANOID_THREADS", "2").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn support_of_nonzonoid_body() {
    let body = example("nonzonoid.json");
    let o = run(&["support", "--body", body.to_str().unwrap(), "-u", "0,0,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2.0\n");
    let o = run(&["support", "--body", body.to_str().unwrap(), "-u", "0,0,-1"]);
    assert_eq!(stdout(&o), "2.0\n");
}

#[test]
fn mesh_row_count_and_feasibility() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let body = example("goe_one_summand.json");
    let o = run(&["mesh", "--body", body.to_str().unwrap(), "--net", "720", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let pts: Vec<Vec<f64>> = text.lines().map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(pts.len(), 720);
    assert!(pts.iter().all(|p| p.len() == 2));
    let z: operanoid::bodies::Operatope = serde_json::from_str(&std::fs::read_to_string(&body).unwrap()).unwrap();
    for (k, p) in pts.iter().enumerate() {
        let t = 2.0 * std::f64::consts::PI * k as f64 / 720.0;
        let h = z.support(&[t.cos(), t.sin()]).unwrap();
        assert!((p[0] * t.cos() + p[1] * t.sin() - h).abs() < 1e-8);
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn obj_output_for_three_dimensional_bodies() {
    let body = example("nonzonoid.json");
    let o = run(&["mesh", "--body", body.to_str().unwrap(), "--net", "50", "--obj"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 50);
    assert!(s.lines().all(|l| l.starts_with("v ") && l.split(' ').count() == 4));
}

#[test]
fn stochastic_commands_need_a_seed() {
    let spec = example("goe_spec.json");
    let o = run(&["operanoid", "support", "--spec", spec.to_str().unwrap(), "-u", "0.6,0.8", "-N", "100"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("--seed"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["support", "--body", "/no/such/file.json", "-u", "1"]).status.code(), Some(2));
    let body = example("nonzonoid.json");
    assert_eq!(run(&["support", "--body", body.to_str().unwrap(), "-u", "1,0"]).status.code(), Some(2));
    assert_eq!(run(&["figures", "fig9", "--seed", "1"]).status.code(), Some(2));
    let o = bin().args(["support", "--body", body.to_str().unwrap(), "-u", "0,0,1"]).env("OPERANOID_THREADS", "x").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn operanoid_support_and_rate() {
    let spec = example("goe_spec.json");
    let args = ["operanoid", "support", "--spec", spec.to_str().unwrap(), "-u", "0.6,0.8", "-N", "2000", "--seed", "7"];
    let a = run(&args);
    assert!(a.status.success());
    let line = stdout(&a);
    let fields: Vec<&str> = line.trim().split(',').collect();
    assert_eq!(fields.len(), 3);
    assert_eq!(fields[2], "2000");
    // threads do not change results
    let b = bin().args(args).env("OPERANOID_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "--seed", "7", "--output-dir", dir.path().to_str().unwrap(),
        "operanoid", "rate", "--spec", spec.to_str().unwrap(), "--ns", "16,64,256", "--net", "90", "-o", "rate.csv",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("rate.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# seed=7 "));
    assert_eq!(lines.next().unwrap(), "N,d_lower,d_upper");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1] <= r[2]));
}

#[test]
fn freezonoid_commands() {
    let o = run(&["freezonoid", "support", "--law", "semicircle:1.0,semicircle:2.0", "-u", "0.6,0.8"]);
    assert!(o.status.success());
    let h: f64 = stdout(&o).trim().parse().unwrap();
    let want = 8.0 / (3.0 * std::f64::consts::PI) * (0.36f64 + 4.0 * 0.64).sqrt();
    assert!((h - want).abs() < 1e-10);

    let o = run(&["freezonoid", "density", "--kappa", "5", "--beta", "1", "-u", "1,1", "--grid", "400"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let pts: Vec<(f64, f64)> = s
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(pts.len(), 400);
    // trapezoid mass of the normalized density
    let mass: f64 = pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    assert!((mass - 1.0).abs() < 1e-2, "{mass}");
    assert!(s.starts_with("# raw_mass="));
}

#[test]
fn lift_and_faces() {
    let body = example("nonzonoid.json");
    let o = run(&["lift", "support", "--body", body.to_str().unwrap(), "-u", "0,0,0,1"]);
    assert!(o.status.success());
    // Tr (A_3)_+ / m = 1
    assert_eq!(stdout(&o), "1.0\n");
    let o = run(&["lift", "support", "--body", body.to_str().unwrap(), "-u", "0,0,0,1", "--raw"]);
    assert_eq!(stdout(&o), "2.0\n");
    let spec = example("goe_spec.json");
    let o = run(&["lift", "support", "--body", spec.to_str().unwrap(), "-u", "1,0.2,0.3", "-N", "100", "--seed", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim().split(',').count(), 3);

    let o = run(&["faces", "--body", body.to_str().unwrap(), "--xi", "0,0,1"]);
    assert!(o.status.success());
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["translation"], serde_json::json!([0.0, 0.0, 2.0]));
    let face: operanoid::bodies::Operatope = serde_json::from_value(j["face"].clone()).unwrap();
    assert!((face.support(&[1.0, 0.0, 0.0]).unwrap()).abs() < 1e-12);
    // M = [[1, 1], [1, 1]] has a one-dimensional kernel, so the face is a segment
    let o = run(&["faces", "--body", body.to_str().unwrap(), "--xi", "0,1,1"]);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["kernel_dims"], serde_json::json!([1]));
}

#[test]
fn hypersurface_commands() {
    let o = run(&["hypersurface", "count", "--gamma", "5", "--m", "3", "--d", "2", "-v", "1,0", "--reps", "2000", "--seed", "7"]);
    assert!(o.status.success());
    let f: Vec<f64> = stdout(&o).trim().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(f.len(), 4);
    assert!((f[0] - f[2]).abs() <= 4.0 * f[1].hypot(f[3]));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chamber.csv");
    let o = run(&["--seed", "3", "hypersurface", "chamber", "--gamma", "5", "--m", "2", "--d", "2", "--grid", "20", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# seed=3 "));
    assert_eq!(text.lines().count(), 2 + 400);
}

#[test]
fn figures_write_labelled_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = run(&["--seed", "1", "--output-dir", d, "figures", "fig2", "--net", "36"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 3);
    for m in [3, 6, 10] {
        let text = std::fs::read_to_string(dir.path().join(format!("fig2_perm_m{m}.csv"))).unwrap();
        assert!(text.lines().nth(1).unwrap().contains(&format!("m={m} d=2 N=150")));
        assert_eq!(text.lines().count(), 2 + 36);
    }
    let o = run(&["--seed", "1", "--output-dir", d, "figures", "fig5", "--net", "36"]);
    assert!(o.status.success());
    for b in ["0.75", "1", "1.25"] {
        assert!(dir.path().join(format!("fig5_beta{b}.csv")).exists());
    }
    assert_eq!(run(&["--output-dir", d, "figures", "fig1"]).status.code(), Some(2));
}
