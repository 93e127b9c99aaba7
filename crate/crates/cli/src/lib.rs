//! Command-line front end for `matmul-core`.
//!
//! ```text
//! matmul multiply A.txt B.txt --algo winograd-mod2 --out C.txt
//! matmul verify  [--algo all] [--orders 2^0..2^8] [--seeds 3]
//! matmul count   --algo strassen --orders 2^1..2^6
//! matmul bench   --algo naive,winograd-mod2 --orders 2^1..2^10 --csv out.csv --svg out.svg
//! ```

mod commands;
pub mod orders;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

pub use commands::{
    cmd_bench, cmd_count, cmd_multiply, cmd_verify, count_rows, preset_names, resolve_presets, verify,
    BenchOptions, Candidate, CmdResult, CountRow, Failure, Mismatch, VerifyReport,
};
pub use orders::parse_orders;

pub mod exit {
    pub const OK: i32 = 0;
    /// A verification or count check failed.
    pub const CHECK: i32 = 1;
    /// I/O or parse error.
    pub const IO: i32 = 2;
    pub const DIMENSION: i32 = 3;
    pub const USAGE: i32 = 4;
}

#[derive(Parser, Debug)]
#[command(
    name = "matmul",
    version,
    about = "Naive, Strassen and Winograd matrix multiplication with operation accounting"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Tuning {
    /// Naive cutoff order for the *-mod2 and *-mod schedule presets
    #[arg(long)]
    cutoff: Option<usize>,
    /// Run winograd-knuth with 8 recursive calls instead of 7
    #[arg(long)]
    knuth_extra_call: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Multiply two matrix files
    Multiply {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "winograd-mod2")]
        algo: String,
        /// Output file (stdout if omitted)
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Integer arithmetic instead of f64
        #[arg(long)]
        exact: bool,
        /// Print the top-level schedule steps to stderr (two-temp, in-place)
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Check presets against the naive product on seeded random inputs
    Verify {
        #[arg(long, default_value = "all")]
        algo: String,
        #[arg(long, default_value = "2^0..2^8")]
        orders: String,
        /// Number of seeds, starting at --seed
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Compare measured operation counts with the recurrence predictions
    Count {
        #[arg(long, default_value = "all")]
        algo: String,
        #[arg(long, default_value = "2^0..2^6")]
        orders: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Time presets over a sweep of orders and write CSV (and optionally SVG)
    Bench {
        #[arg(long, default_value = "naive,strassen-mod2,winograd-mod2")]
        algo: String,
        #[arg(long, default_value = "2^1..2^10")]
        orders: String,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output (stdout if omitted)
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Log-log plot of median time against order
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Integer entries in [-8, 8] instead of reals in [-1, 1]
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
}

fn command() -> clap::Command {
    let names = preset_names();
    let algo_help = format!("Preset name, or a comma list where several are accepted. Presets: {names}");
    let mut cmd = Cli::command().after_help(format!("Presets: {names}"));
    for sub in ["multiply", "verify", "count", "bench"] {
        let h = algo_help.clone();
        cmd = cmd.mut_subcommand(sub, |s| s.mut_arg("algo", |a| a.help(h)));
    }
    cmd
}

fn orders_arg(text: &str) -> Result<Vec<usize>, Failure> {
    parse_orders(text).map_err(|m| Failure::new(exit::USAGE, format!("--orders: {m}")))
}

fn dispatch(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Cmd::Multiply { a, b, algo, out: out_path, exact, trace, tuning } => {
            let presets = resolve_presets(&algo, tuning.cutoff, tuning.knuth_extra_call)?;
            let [p] = presets.as_slice() else {
                return Err(Failure::new(exit::USAGE, "multiply takes exactly one preset"));
            };
            cmd_multiply(&a, &b, p, out_path.as_deref(), exact, trace, out, err)
        }
        Cmd::Verify { algo, orders, seeds, seed, tuning } => {
            let presets = resolve_presets(&algo, tuning.cutoff, tuning.knuth_extra_call)?;
            let orders = orders_arg(&orders)?;
            let seeds: Vec<u64> = (0..seeds).map(|i| seed.wrapping_add(i)).collect();
            let cands: Vec<&dyn Candidate> = presets.iter().map(|p| p as &dyn Candidate).collect();
            cmd_verify(&cands, &orders, &seeds, out)
        }
        Cmd::Count { algo, orders, seed, tuning } => {
            let presets = resolve_presets(&algo, tuning.cutoff, tuning.knuth_extra_call)?;
            cmd_count(&presets, &orders_arg(&orders)?, seed, out)
        }
        Cmd::Bench { algo, orders, reps, seed, csv, svg, exact, tuning } => {
            let presets = resolve_presets(&algo, tuning.cutoff, tuning.knuth_extra_call)?;
            if reps == 0 {
                return Err(Failure::new(exit::USAGE, "--reps must be at least 1"));
            }
            let orders = orders_arg(&orders)?;
            let opts =
                BenchOptions { orders: &orders, reps, seed, exact, csv: csv.as_deref(), svg: svg.as_deref() };
            cmd_bench(&presets, &opts, out)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            // --help and --version land here too
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return exit::USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return exit::OK;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return exit::USAGE;
        }
    };
    match dispatch(cli.cmd, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
