use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use matmul_cli::{cmd_verify, verify, Candidate};
use matmul_core::{preset, variant_catalog, Matrix, Preset};

fn matmul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matmul")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn multiply_standard_pair() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2 2\n1 2\n3 4\n");
    let b = write(dir.path(), "b.txt", "2 2\n5 6\n7 8\n");
    let out = dir.path().join("c.txt");
    let o = matmul(&["multiply", &a, &b, "--algo", "strassen", "--exact", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert_eq!(fs::read_to_string(&out).unwrap(), "2 2\n19 22\n43 50\n");
}

#[test]
fn multiply_rectangular_matches_naive() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "5 3\n1 2 3\n4 5 6\n7 8 9\n-1 0 2\n3 3 -3\n");
    let b = write(dir.path(), "b.txt", "3 7\n1 0 2 0 -1 4 5\n2 2 2 2 2 2 2\n-3 1 0 8 7 6 5\n");
    let naive = matmul(&["multiply", &a, &b, "--algo", "naive", "--exact"]);
    let mod2 = matmul(&["multiply", &a, &b, "--algo", "winograd-mod2", "--exact"]);
    assert_eq!(code(&mod2), 0);
    assert_eq!(stdout(&naive), stdout(&mod2));
    assert!(stdout(&mod2).starts_with("5 7\n"));
    // reals round-trip through the writer
    let real = matmul(&["multiply", &a, &b, "--algo", "in-place-mod"]);
    let lines: Vec<String> = stdout(&real).lines().skip(1).map(String::from).collect();
    let first: Vec<f64> = lines[0].split(' ').map(|t| t.parse().unwrap()).collect();
    assert_eq!(first, vec![-4.0, 7.0, 6.0, 28.0, 24.0, 26.0, 24.0]);
}

#[test]
fn multiply_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2 2\n1 2\n3 4\n");
    let c = write(dir.path(), "c.txt", "3 3\n1 2 3\n4 5 6\n7 8 9\n");
    let bad = write(dir.path(), "bad.txt", "2 2\n1 2\n3 x\n");

    let o = matmul(&["multiply", &a, &a, "--algo", "unknown-name"]);
    assert_eq!(code(&o), 4);
    let msg = String::from_utf8_lossy(&o.stderr);
    for p in variant_catalog() {
        assert!(msg.contains(p.name), "{msg}");
    }
    assert_eq!(code(&matmul(&["multiply", &a, &c])), 3);
    let o = matmul(&["multiply", &a, &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(code(&matmul(&["multiply", &a, "/definitely/missing"])), 2);
    assert_eq!(code(&matmul(&["multiply", &a, &a, "--algo", "naive,strassen"])), 4);
    assert_eq!(code(&matmul(&["multiply", &a, &a, "--algo", "strassen-mod2", "--cutoff", "0"])), 4);
    assert_eq!(code(&matmul(&["frobnicate"])), 4);
}

#[test]
fn trace_prints_schedule_steps() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2 2\n1 2\n3 4\n");
    let o = matmul(&["multiply", &a, &a, "--algo", "two-temp", "--trace", "--exact"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 22);
    assert!(err.lines().all(|l| l.starts_with("step ")));
    assert_eq!(stdout(&o), "2 2\n7 10\n15 22\n");
}

#[test]
fn help_and_version_exit_zero_and_list_presets() {
    let o = matmul(&["--help"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("Presets: ")).unwrap();
    let listed: Vec<&str> = line["Presets: ".len()..].split(", ").collect();
    let names: Vec<&str> = variant_catalog().iter().map(|p| p.name).collect();
    assert_eq!(listed, names);
    assert!(listed.iter().all(|n| preset(n).is_some()));
    assert_eq!(code(&matmul(&["--version"])), 0);
    assert_eq!(code(&matmul(&["bench", "--help"])), 0);
}

#[test]
fn count_rows_and_exit() {
    let o = matmul(&["count", "--algo", "strassen,winograd-block", "--orders", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| l.trim_start().starts_with("2 "))
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(&rows[0][1..3], ["7", "18"]);
    assert_eq!(&rows[1][1..3], ["7", "15"]);

    let o = matmul(&["count", "--algo", "in-place,in-place-mod", "--orders", "2^0..2^6"]);
    assert_eq!(code(&o), 0);
    for l in stdout(&o).lines().filter(|l| l.ends_with("ok")) {
        assert_eq!(l.split_whitespace().nth(3), Some("0"), "{l}");
    }
    assert_eq!(code(&matmul(&["count", "--algo", "strassen", "--orders", "12"])), 4);
    assert_eq!(code(&matmul(&["count", "--orders", "2^1..x"])), 4);
}

#[test]
fn verify_small_sweep_and_empty_list() {
    let o = matmul(&["verify", "--orders", "2^0..2^4", "--seeds", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("240 checks, 0 failures"));
    let o = matmul(&["verify", "--algo", ""]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 checks, 0 failures"));
}

/// A deliberately broken kernel: off by one in the corner.
struct Corrupted(Preset);

impl Candidate for Corrupted {
    fn name(&self) -> &str {
        "corrupted-strassen"
    }

    fn mul_exact(&self, a: &Matrix<i64>, b: &Matrix<i64>) -> matmul_core::Result<Matrix<i64>> {
        let mut c = self.0.mul_exact(a, b)?;
        let n = c.rows() - 1;
        c[(n, n)] += 1;
        Ok(c)
    }

    fn mul_real(&self, a: &Matrix<f64>, b: &Matrix<f64>) -> matmul_core::Result<Matrix<f64>> {
        self.0.mul_real(a, b)
    }
}

#[test]
fn verify_catches_corrupted_kernel() {
    let good = preset("strassen").unwrap();
    let bad = Corrupted(good);
    let report = verify(&[&good, &bad], &[1, 4, 16], &[7]);
    assert_eq!(report.checks, 12);
    assert_eq!(report.failures.len(), 3);
    assert!(report
        .failures
        .iter()
        .all(|f| f.name == "corrupted-strassen" && f.mode == "exact" && f.max_abs_diff == 1.0));

    let mut out = Vec::new();
    assert_eq!(cmd_verify(&[&good, &bad], &[4], &[7], &mut out).unwrap(), 1);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("FAIL corrupted-strassen order 4 seed 7 exact"));
}

#[test]
fn bench_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let svg = dir.path().join("b.svg");
    let o = matmul(&[
        "bench",
        "--algo",
        "naive,strassen",
        "--orders",
        "2^1..2^5",
        "--reps",
        "3",
        "--exact",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{o:?}");
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("algo,order,reps,min_time_s,median_time_s,mults,adds,temp_buffers,peak_live_elements,seed")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 10);
    for r in &rows {
        let (min, med): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
        assert!(min <= med);
    }
    assert_eq!(rows[9][..3], ["strassen", "32", "3"]);
    assert_eq!(rows[9][5], "16807");
    let plot = fs::read_to_string(&svg).unwrap();
    assert_eq!(plot.matches("<polyline").count(), 2);
}

#[test]
fn bench_csv_to_stdout_and_bad_paths() {
    let o = matmul(&["bench", "--algo", "winograd-mod2", "--orders", "4,12", "--reps", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 3);
    assert_eq!(code(&matmul(&["bench", "--orders", "2", "--csv", "/no/such/dir/x.csv"])), 2);
    assert_eq!(code(&matmul(&["bench", "--orders", "2", "--svg", "/no/such/dir/x.svg"])), 2);
    assert_eq!(code(&matmul(&["bench", "--orders", "2", "--reps", "0"])), 4);
}
