use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pincode::f2la::io::read_matrix;
use pincode::f2la::MatrixFormat;
use tempfile::TempDir;

fn write_spec(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pincode"))
        .args(args)
        .env_remove("PINCODE_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const STEANE: &str = "[relation]\nbuilder = \"steane\"\n[code]\nx = 1\nz = 1\n";

#[test]
fn build_writes_relation() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "complete.toml",
        "[relation]\nlevels = [2, 2, 2, 2, 2, 2, 4]\n[output]\ndir = \"out\"\n",
    );
    let o = run(&["build", spec.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("flags 256"), "{text}");
    assert!(text.contains("validation pass"));
    assert!(dir.path().join("out/relation.txt").exists());
    assert_eq!(std::fs::read_to_string(dir.path().join("out/build.txt")).unwrap(), text);
}

#[test]
fn build_coxeter_group() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "a3.toml", "[relation]\nbuilder = \"coxeter\"\norders = [3, 3]\n");
    let o = run(&["build", spec.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("flags 24"));
    assert!(stdout(&o).contains("levels [4, 6, 4]"));
}

#[test]
fn malformed_spec_exits_with_parse_code() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "bad.toml", "[relation]\nbuilder = \"complete\"\nlevels = [2, 2\n");
    let o = run(&["build", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
    let missing = write_spec(dir.path(), "missing.toml", "[relation]\nbuilder = \"reed_muller\"\n");
    assert_eq!(run(&["build", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn odd_relation_fails_validation() {
    let dir = TempDir::new().unwrap();
    let rel = "D 1\nlevel 0 a b\nlevel 1 p q\nflag a p\nflag a q\nflag b p\n";
    let spec = write_spec(dir.path(), "odd.toml", "[relation]\nbuilder = \"relation_file\"\npath = \"odd.rel\"\n");
    write_spec(dir.path(), "odd.rel", rel);
    let o = run(&["build", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn analyze_steane() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "steane.toml", STEANE);
    let o = run(&["analyze", spec.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("parameters [[7,1,3]]"), "{}", stdout(&o));
    assert!(stdout(&o).contains("seeds none"));
}

#[test]
fn analyze_bound_mode_reports_seed() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "big.toml",
        "[relation]\nlevels = [2, 2, 2, 2, 2, 2, 4]\n[code]\nx = 2\nz = 4\n[distance]\nmode = \"bound\"\nbudget = 400\nseed = 1\n",
    );
    let o = run(&["analyze", spec.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("n=256 k=30 d≤8"), "{text}");
    assert!(text.contains("seeds distance=1"));
    assert!(text.contains("spec-sha256 "));
    assert!(text.contains(&format!("pincode {}", env!("CARGO_PKG_VERSION"))));
}

#[test]
fn constraint_and_warning() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "steane.toml", STEANE);
    let s = spec.to_str().unwrap();
    assert_eq!(run(&["analyze", s, "--x", "2", "--z", "1"]).status.code(), Some(3));
    let o = run(&["analyze", s, "--x", "0", "--z", "1"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning: x = 0"));
}

#[test]
fn transversality_of_ccz_code() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "ccz.toml",
        "[relation]\nlevels = [2, 2, 2, 2, 2, 2]\n[code]\nccz_x = 2\n[transversality]\nlevel = 3\n",
    );
    let o = run(&["transversality", spec.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("quasi pass"), "{text}");
    let gates = text.lines().find(|l| l.starts_with("gates ")).unwrap();
    assert_eq!(gates.matches("CCZ(").count(), 15);
    let level1 = run(&["transversality", spec.to_str().unwrap(), "--level", "1"]);
    assert!(stdout(&level1).contains("exact pass"));
}

#[test]
fn transversality_lists_violations() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "steane.toml", STEANE);
    let o = run(&["transversality", spec.to_str().unwrap(), "--level", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("exact fail"));
    assert!(text.contains("  violation "), "{text}");
}

#[test]
fn gauge_and_shrunk_reports() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "rm.toml",
        "[relation]\nbuilder = \"reed_muller\"\nm = 5\n[code]\nx = 1\nz = 2\n[output]\ndir = \"out\"\n",
    );
    let s = spec.to_str().unwrap();
    let g = run(&["gauge", s]);
    assert!(g.status.success(), "{}", stderr(&g));
    assert!(stdout(&g).contains("stabilizer-code-k="));
    let sh = run(&["shrunk", s, "--type", "0"]);
    assert!(sh.status.success(), "{}", stderr(&sh));
    assert!(stdout(&sh).contains("boundaries-compose-to-zero true"));
    assert!(dir.path().join("out/shrunk_provenance.txt").exists());
}

const PUNCTURE: &str = "[relation]\nbuilder = \"reed_muller\"\nm = 7\n[puncture]\npinned = 2\ntarget_k = 4\ntarget_d = 4\nbudget = 200\nseed = 9\n";

#[test]
fn puncture_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "p.toml", PUNCTURE);
    let s = spec.to_str().unwrap();
    let a = run(&["puncture", s]);
    let b = run(&["puncture", s]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seeds puncture=9"));
    let threaded = Command::new(env!("CARGO_BIN_EXE_pincode"))
        .args(["puncture", s])
        .env("PINCODE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(threaded.stdout, a.stdout);
}

#[test]
fn puncture_budget_zero_is_unpunctured() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "p.toml", PUNCTURE);
    let o = run(&["puncture", spec.to_str().unwrap(), "--budget", "0"]);
    let text = stdout(&o);
    assert!(text.contains("candidates 1"), "{text}");
    assert!(text.contains("\n0 128 0 - - - \n"), "{text}");
}

#[test]
fn puncture_rejects_non_triorthogonal_input() {
    let dir = TempDir::new().unwrap();
    write_spec(dir.path(), "g.txt", "110\n011\n");
    let spec = write_spec(
        dir.path(),
        "p.toml",
        "[relation]\nbuilder = \"steane\"\n[puncture]\nmatrix = \"g.txt\"\n",
    );
    let o = run(&["puncture", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("rows"), "{}", stderr(&o));
}

#[test]
fn export_alist_matrices() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "steane.toml", STEANE);
    let out = dir.path().join("export");
    let o = run(&["export", spec.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "alist"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let sx = read_matrix(&std::fs::read_to_string(out.join("sx.txt")).unwrap(), MatrixFormat::Alist).unwrap();
    assert_eq!((sx.nrows(), sx.ncols()), (3, 7));
    assert!(out.join("lz.txt").exists());
    assert_eq!(run(&["export", spec.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn invalid_thread_count() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "steane.toml", STEANE);
    let o = Command::new(env!("CARGO_BIN_EXE_pincode"))
        .args(["analyze", spec.to_str().unwrap()])
        .env("PINCODE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
