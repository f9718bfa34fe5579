//! Command-line front end: `modulizer <analyze|convert|wrap|emit-build|lint|stats>`.
//!
//! Exit codes:
//!
//! | code | meaning                                                  |
//! |------|----------------------------------------------------------|
//! | 0    | success                                                  |
//! | 1    | `lint` found errors (or warnings, with `--fail-on-warning`) |
//! | 2    | bad configuration, manifest, arguments or I/O            |
//! | 3    | `convert` found cyclic header includes                   |
//! | 4    | `convert` hit a conversion error                         |

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod analyze;
mod convert;
mod emit;
mod lint;
mod output;
mod project;
mod report;
mod wrap;

pub use report::RunReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_LINT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CYCLES: i32 = 3;
pub const EXIT_CONVERSION: i32 = 4;

/// Environment variable bounding the number of worker threads.
pub const JOBS_VAR: &str = "MODULIZER_JOBS";

#[derive(Debug, Parser)]
#[command(name = "modulizer", version, about = "Convert header-based C++ projects into C++20 modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Project configuration (JSON).
    #[arg(long, global = true, default_value = "modulizer.json")]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Interface units re-export the partitions they import.
    #[arg(long, global = true)]
    pub reexport: bool,
    /// Treat warnings as failures.
    #[arg(long, global = true)]
    pub fail_on_warning: bool,
    /// Install the interface units (emit-build).
    #[arg(long, global = true)]
    pub install_miu: bool,
    /// Install the built module interface (emit-build).
    #[arg(long, global = true)]
    pub install_bmi: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Include-graph statistics: transitive counts, histogram, cycles.
    Analyze(AnalyzeArgs),
    /// Convert headers and sources into module units plus the primary unit.
    Convert,
    /// Generate wrapper modules from symbol manifests.
    Wrap(ManifestArgs),
    /// Write CMake build and install rules for converted units.
    EmitBuild(EmitArgs),
    /// Report module-readiness problems.
    Lint,
    /// Summarize symbol manifests as a table.
    Stats(ManifestArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Only analyze files matching one of these globs (relative paths).
    #[arg(long = "include", value_name = "GLOB")]
    pub include: Vec<String>,
    /// Skip files matching any of these globs.
    #[arg(long = "exclude", value_name = "GLOB")]
    pub exclude: Vec<String>,
    /// Histogram bucket edges, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 5, 10, 20, 50, 100, 200, 500, 1000])]
    pub buckets: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct ManifestArgs {
    /// Symbol manifest files (JSON).
    #[arg(required = true)]
    pub manifests: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    /// Directory holding `units.json` from `convert` (default: --out).
    #[arg(long)]
    pub units: Option<PathBuf>,
    /// Directory holding `wrapper_units.json` from `wrap` (default: the units directory).
    #[arg(long)]
    pub wrappers: Option<PathBuf>,
    /// CMake target name (default: `<module>_module`).
    #[arg(long)]
    pub target: Option<String>,
    /// Install destination root (default: `${CMAKE_INSTALL_LIBDIR}/cmake/<target>`).
    #[arg(long)]
    pub install_root: Option<String>,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::usage(format!("{}: {err}", path.display()))
    }
}

impl From<modulizer_core::Error> for CliError {
    fn from(e: modulizer_core::Error) -> Self {
        Self::usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let pool = thread_pool()?;
    pool.install(|| match &cli.command {
        Command::Analyze(args) => analyze::run(&cli.common, args),
        Command::Convert => convert::run(&cli.common),
        Command::Wrap(args) => wrap::run_wrap(&cli.common, args),
        Command::EmitBuild(args) => emit::run(&cli.common, args),
        Command::Lint => lint::run(&cli.common),
        Command::Stats(args) => wrap::run_stats(&cli.common, args),
    })
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(value) = std::env::var_os(JOBS_VAR) {
        let jobs = value
            .to_str()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::usage(format!("{JOBS_VAR} must be a positive integer")))?;
        builder = builder.num_threads(jobs);
    }
    builder.build().map_err(|e| CliError::usage(format!("cannot start worker threads: {e}")))
}

fn require_out(common: &Common) -> CliResult<&std::path::Path> {
    common.out.as_deref().ok_or_else(|| CliError::usage("--out DIR is required for this command"))
}
