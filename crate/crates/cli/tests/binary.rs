use std::path::Path;
use std::process::{Command, Output};

fn affine(args: &[&str], env_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_affine"));
    cmd.args(args).env_remove("AFFINE_OUT_DIR");
    if let Some(d) = env_dir {
        cmd.env("AFFINE_OUT_DIR", d);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const AUDIT_CFG: &str = r#"
kind = "conservation_audit"
name = "audit_run"
[model]
type = "affine_affine"
b = 0.3
[numerics]
steps = 200
samples = 2
"#;

#[test]
fn run_is_byte_deterministic_and_audits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.toml", AUDIT_CFG);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for (out, threads) in [(&a, "1"), (&b, "3")] {
        let o = affine(
            &[
                "run",
                &cfg,
                "--seed",
                "5",
                "--out",
                out.to_str().unwrap(),
                "--threads",
                threads,
            ],
            None,
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(String::from_utf8_lossy(&bytes).contains("# seed=5\n"));

    let o = affine(&["audit", a.to_str().unwrap(), "--rerun"], None);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("config_hash=ok data_hash=ok rerun=ok"));

    let text = String::from_utf8(bytes).unwrap();
    let tampered = text.replacen("\n0,", "\n7,", 1);
    assert_ne!(tampered, text);
    let tpath = write(dir.path(), "t.csv", &tampered);
    let o = affine(&["audit", &tpath], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("data_hash=MISMATCH"));
}

#[test]
fn env_dir_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.toml", AUDIT_CFG);
    let o = affine(&["run", &cfg, "--format", "json"], Some(dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = dir.path().join("audit_run.json");
    assert!(std::fs::read_to_string(&out).unwrap().starts_with('{'));
    assert!(affine(&["audit", out.to_str().unwrap()], None).status.success());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.toml",
        "kind = \"classical_trajectory\"\ndim = 3\n[model]\ntype = \"affine_affine\"\na = 3.0\nb = -1.0\n",
    );
    let o = affine(&["run", &bad], Some(dir.path()));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("A + nB = 0"));

    let numeric = write(
        dir.path(),
        "num.toml",
        "kind = \"spectrum_2d\"\n[model]\ntype = \"affine_affine\"\nb = 0.5\n[numerics]\ngrid_points = 16\ntolerance = 1e-12\n[channels]\nlist = [[3, 3]]\n",
    );
    let out = dir.path().join("failed.csv");
    let o = affine(&["run", &numeric, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(std::fs::read_to_string(&out).unwrap().contains("# status=failed"));

    let missing = dir.path().join("nope.toml");
    assert_eq!(affine(&["run", missing.to_str().unwrap()], None).status.code(), Some(4));
}

#[test]
fn sweep_writes_one_table_per_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let batch = r#"
[[scenario]]
kind = "boundedness_2d"
name = "grid"
[scenario.model]
type = "affine_affine"

[[scenario]]
kind = "spectrum_qpm"
[scenario.model]
type = "dalembert"
j_iso = 1.0
[scenario.potential]
type = "qpm_family"
a = 0.3
b = 0.8
c = 0.5
[scenario.channels]
list = [[0, 0]]
"#;
    let cfg = write(dir.path(), "batch.toml", batch);
    let out = dir.path().join("tables");
    let o = affine(&["sweep", &cfg, "--out", out.to_str().unwrap(), "--seed", "100"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let second = std::fs::read_to_string(out.join("001_spectrum_qpm.csv")).unwrap();
    assert!(second.contains("# seed=101\n"));
    assert!(out.join("grid.csv").exists());
}
