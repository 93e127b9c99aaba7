use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use matmul_core::{
    bench_run, max_abs_diff, multiply, multiply_traced, predicted_ops_for, predicted_temp_buffers,
    random_matrix, read_matrix, seeded_rng, variant_catalog, write_matrix, BenchRecord, Kernel, MatmulError,
    Matrix, OpCounter, Preset, RandomEntry, Scalar, VariantSpec,
};

use crate::exit;

/// A command that could not run to completion: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<MatmulError> for Failure {
    fn from(e: MatmulError) -> Self {
        let code = match e {
            MatmulError::Dimension(_) => exit::DIMENSION,
            MatmulError::Parse { .. } | MatmulError::Io(_) => exit::IO,
            MatmulError::Parameter(_) => exit::USAGE,
            MatmulError::Contract(_) | MatmulError::Schedule(_) | MatmulError::Nondeterministic(_) => {
                exit::CHECK
            }
        };
        Failure::new(code, e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(exit::IO, format!("{}: {e}", path.display()))
}

fn out_err(e: std::io::Error) -> Failure {
    Failure::new(exit::IO, format!("write failed: {e}"))
}

pub type CmdResult = Result<i32, Failure>;

/// Resolves a comma list of preset names (`all` for the whole catalog; the
/// empty string for none), applying `--cutoff` and `--knuth-extra-call`.
pub fn resolve_presets(
    list: &str,
    cutoff: Option<usize>,
    knuth_extra_call: bool,
) -> Result<Vec<Preset>, Failure> {
    let catalog = variant_catalog();
    let names: Vec<&str> = match list.trim() {
        "all" => catalog.iter().map(|p| p.name).collect(),
        l => l.split(',').map(str::trim).filter(|s| !s.is_empty()).collect(),
    };
    names
        .into_iter()
        .map(|name| {
            let mut p = *catalog.iter().find(|p| p.name == name).ok_or_else(|| {
                Failure::new(
                    exit::USAGE,
                    format!("unknown preset '{name}'; valid presets: {}", preset_names()),
                )
            })?;
            if let Some(t) = cutoff {
                p.spec = p.spec.with_cutoff(t);
            }
            if knuth_extra_call && p.spec.kernel == Kernel::WinogradKnuth {
                p.spec.knuth_extra_call = true;
            }
            p.spec.validate()?;
            Ok(p)
        })
        .collect()
}

pub fn preset_names() -> String {
    variant_catalog().iter().map(|p| p.name).collect::<Vec<_>>().join(", ")
}

fn read_file<T: Scalar>(path: &Path) -> Result<Matrix<T>, Failure> {
    let f = File::open(path).map_err(|e| io_failure(path, e))?;
    read_matrix(BufReader::new(f)).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn multiply_files<T: Scalar>(
    a_path: &Path,
    b_path: &Path,
    spec: &VariantSpec,
    out_path: Option<&Path>,
    trace: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let a: Matrix<T> = read_file(a_path)?;
    let b: Matrix<T> = read_file(b_path)?;
    let mut counter = OpCounter::new();
    let c = if trace {
        let mut log = |s: &matmul_core::ScheduleStep| {
            let _ = writeln!(err, "{s}");
        };
        multiply_traced(&a, &b, spec, &mut counter, Some(&mut log))?
    } else {
        multiply(&a, &b, spec, &mut counter)?
    };
    match out_path {
        Some(p) => {
            let f = File::create(p).map_err(|e| io_failure(p, e))?;
            let mut w = BufWriter::new(f);
            write_matrix(&c, &mut w)?;
            w.flush().map_err(|e| io_failure(p, e))?;
        }
        None => write_matrix(&c, &mut *out)?,
    }
    Ok(exit::OK)
}

/// Multiplies two matrix files. Integer arithmetic with `exact`, `f64`
/// otherwise. Writes to `out_path`, or to `out` when absent.
#[allow(clippy::too_many_arguments)]
pub fn cmd_multiply(
    a_path: &Path,
    b_path: &Path,
    preset: &Preset,
    out_path: Option<&Path>,
    exact: bool,
    trace: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if exact {
        multiply_files::<i64>(a_path, b_path, &preset.spec, out_path, trace, out, err)
    } else {
        multiply_files::<f64>(a_path, b_path, &preset.spec, out_path, trace, out, err)
    }
}

/// Something `verify` can check against the naive product.
pub trait Candidate {
    fn name(&self) -> &str;
    fn mul_exact(&self, a: &Matrix<i64>, b: &Matrix<i64>) -> matmul_core::Result<Matrix<i64>>;
    fn mul_real(&self, a: &Matrix<f64>, b: &Matrix<f64>) -> matmul_core::Result<Matrix<f64>>;
}

impl Candidate for Preset {
    fn name(&self) -> &str {
        self.name
    }

    fn mul_exact(&self, a: &Matrix<i64>, b: &Matrix<i64>) -> matmul_core::Result<Matrix<i64>> {
        multiply(a, b, &self.spec, &mut OpCounter::new())
    }

    fn mul_real(&self, a: &Matrix<f64>, b: &Matrix<f64>) -> matmul_core::Result<Matrix<f64>> {
        multiply(a, b, &self.spec, &mut OpCounter::new())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub name: String,
    pub order: usize,
    pub seed: u64,
    pub mode: &'static str,
    /// NaN when the candidate returned an error.
    pub max_abs_diff: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: usize,
    pub failures: Vec<Mismatch>,
}

fn inputs<T: RandomEntry>(order: usize, seed: u64) -> (Matrix<T>, Matrix<T>) {
    let mut rng = seeded_rng(seed);
    (random_matrix(order, order, &mut rng), random_matrix(order, order, &mut rng))
}

fn naive<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let spec = VariantSpec::new(Kernel::Naive, matmul_core::BasePolicy::ScalarOnly);
    multiply(a, b, &spec, &mut OpCounter::new()).expect("naive product of square inputs")
}

/// Runs every candidate against the naive oracle for each (order, seed):
/// exact on integers in [-8, 8], and within `1e-9 * order` on reals in
/// [-1, 1].
pub fn verify(candidates: &[&dyn Candidate], orders: &[usize], seeds: &[u64]) -> VerifyReport {
    let mut report = VerifyReport::default();
    if candidates.is_empty() {
        return report;
    }
    for &order in orders {
        for &seed in seeds {
            let (ai, bi) = inputs::<i64>(order, seed);
            let (ar, br) = inputs::<f64>(order, seed);
            let (ci, cr) = (naive(&ai, &bi), naive(&ar, &br));
            let tol = 1e-9 * order as f64;
            for cand in candidates {
                let mut fail = |mode, diff, detail: String| {
                    report.failures.push(Mismatch {
                        name: cand.name().to_string(),
                        order,
                        seed,
                        mode,
                        max_abs_diff: diff,
                        detail,
                    })
                };
                match cand.mul_exact(&ai, &bi).and_then(|c| max_abs_diff(&c, &ci)) {
                    Ok(0) => {}
                    Ok(d) => fail("exact", d as f64, String::new()),
                    Err(e) => fail("exact", f64::NAN, e.to_string()),
                }
                match cand.mul_real(&ar, &br).and_then(|c| max_abs_diff(&c, &cr)) {
                    Ok(d) if d <= tol => {}
                    Ok(d) => fail("real", d, format!("tolerance {tol:e}")),
                    Err(e) => fail("real", f64::NAN, e.to_string()),
                }
                report.checks += 2;
            }
        }
    }
    report
}

/// Prints a pass/fail matrix (presets by orders) and lists every mismatch.
/// Exit 1 on any failure.
pub fn cmd_verify(
    candidates: &[&dyn Candidate],
    orders: &[usize],
    seeds: &[u64],
    out: &mut dyn Write,
) -> CmdResult {
    let report = verify(candidates, orders, seeds);
    let width = candidates.iter().map(|c| c.name().len()).max().unwrap_or(0).max(6);
    let mut line = format!("{:<width$}", "preset");
    for o in orders {
        line += &format!(" {o:>5}");
    }
    if !candidates.is_empty() {
        writeln!(out, "{line}").map_err(out_err)?;
    }
    for c in candidates {
        let mut line = format!("{:<width$}", c.name());
        for &o in orders {
            let bad = report.failures.iter().any(|f| f.name == c.name() && f.order == o);
            line += &format!(" {:>5}", if bad { "FAIL" } else { "pass" });
        }
        writeln!(out, "{line}").map_err(out_err)?;
    }
    for f in &report.failures {
        writeln!(
            out,
            "FAIL {} order {} seed {} {} max_abs_diff {:e} {}",
            f.name, f.order, f.seed, f.mode, f.max_abs_diff, f.detail
        )
        .map_err(out_err)?;
    }
    writeln!(out, "{} checks, {} failures", report.checks, report.failures.len()).map_err(out_err)?;
    Ok(if report.failures.is_empty() { exit::OK } else { exit::CHECK })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountRow {
    pub order: usize,
    /// (mults, adds, temp_buffers)
    pub measured: (u64, u64, u64),
    pub predicted: (u64, u64, u64),
}

impl CountRow {
    pub fn matches(&self) -> bool {
        self.measured == self.predicted
    }
}

pub fn count_rows(preset: &Preset, orders: &[usize], seed: u64) -> Result<Vec<CountRow>, Failure> {
    orders
        .iter()
        .map(|&order| {
            let (m, a) = predicted_ops_for(&preset.spec, order)?;
            let t = predicted_temp_buffers(&preset.spec, order)?;
            let (x, y) = inputs::<i64>(order, seed);
            let mut c = OpCounter::new();
            multiply(&x, &y, &preset.spec, &mut c)?;
            Ok(CountRow { order, measured: (c.mults(), c.adds(), c.temp_buffers()), predicted: (m, a, t) })
        })
        .collect()
}

/// Measured against predicted counts per order; exit 1 on any divergence.
pub fn cmd_count(presets: &[Preset], orders: &[usize], seed: u64, out: &mut dyn Write) -> CmdResult {
    let mut ok = true;
    for p in presets {
        let rows = count_rows(p, orders, seed)?;
        writeln!(out, "{} ({})", p.name, p.spec).map_err(out_err)?;
        writeln!(
            out,
            "{:>6} {:>14} {:>14} {:>8}   {:>14} {:>14} {:>8}  status",
            "order", "mults", "adds", "temps", "pred_mults", "pred_adds", "pred_tmp"
        )
        .map_err(out_err)?;
        for r in rows {
            let (m, a, t) = r.measured;
            let (pm, pa, pt) = r.predicted;
            ok &= r.matches();
            let status = if r.matches() { "ok" } else { "DIVERGES" };
            writeln!(out, "{:>6} {m:>14} {a:>14} {t:>8}   {pm:>14} {pa:>14} {pt:>8}  {status}", r.order)
                .map_err(out_err)?;
        }
    }
    Ok(if ok { exit::OK } else { exit::CHECK })
}

pub struct BenchOptions<'a> {
    pub orders: &'a [usize],
    pub reps: usize,
    pub seed: u64,
    pub exact: bool,
    pub csv: Option<&'a Path>,
    pub svg: Option<&'a Path>,
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| io_failure(path, e))
}

/// Benchmarks each preset over the orders. CSV goes to `opts.csv`, or to
/// `out` when no path is given. Output files are opened before any work.
pub fn cmd_bench(presets: &[Preset], opts: &BenchOptions, out: &mut dyn Write) -> CmdResult {
    let csv_sink: Box<dyn Write + '_> = match opts.csv {
        Some(p) => Box::new(create(p)?),
        None => Box::new(&mut *out),
    };
    let mut svg_file = opts.svg.map(create).transpose()?;
    let mut writer = csv::Writer::from_writer(csv_sink);
    let mut all: Vec<BenchRecord> = Vec::new();
    for p in presets {
        let records = if opts.exact {
            bench_run::<i64>(p, opts.orders, opts.reps, opts.seed)?
        } else {
            bench_run::<f64>(p, opts.orders, opts.reps, opts.seed)?
        };
        for r in &records {
            writer.serialize(r).map_err(|e| Failure::new(exit::IO, format!("csv: {e}")))?;
        }
        writer.flush().map_err(out_err)?;
        all.extend(records);
    }
    drop(writer);
    if opts.csv.is_some() {
        for r in &all {
            writeln!(
                out,
                "{:<14} order {:>5}  median {:.6e} s  mults {:>13}  temp_buffers {}",
                r.algo, r.order, r.median_time, r.mults, r.temp_buffers
            )
            .map_err(out_err)?;
        }
    }
    if let (Some(f), Some(p)) = (svg_file.as_mut(), opts.svg) {
        f.write_all(crate::svg::render(&all).as_bytes())
            .and_then(|_| f.flush())
            .map_err(|e| io_failure(p, e))?;
    }
    Ok(exit::OK)
}
