//! The `nilgrowth` command line: argument parsing, descriptors and the
//! commands themselves, kept out of `main` so tests can drive them.

pub mod commands;
pub mod descriptor;
pub mod number;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilgrowth::groups::DEFAULT_BUDGET;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] nilgrowth::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Invalid = 1,
    Overflow = 2,
}

#[derive(Parser, Debug)]
#[command(name = "nilgrowth", version, about = "Word-metric growth of nilpotent groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Cap on stored elements (intervals for Heisenberg-type groups).
    #[arg(long, env = "NILGROWTH_BUDGET")]
    pub budget: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Common {
    pub fn budget(&self) -> Result<usize, CliError> {
        match self.budget {
            Some(0) => Err(CliError::Invalid("budget must be positive".into())),
            Some(b) => Ok(b),
            None => Ok(DEFAULT_BUDGET),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ball sizes |S^m| for m = 0..=max-m.
    Growth {
        #[arg(long)]
        group: String,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long = "max-m")]
        max_m: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Growth polynomial, envelope and log-log profile of a Lie progression.
    Profile {
        #[arg(long)]
        algebra: String,
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<u64>,
        /// Upper-triangular constant.
        #[arg(long = "C", default_value = "1")]
        c: String,
        /// Compare with |S^m| for m up to this radius, S = P ∪ P⁻¹.
        #[arg(long = "compare-max-m")]
        compare_max_m: Option<usize>,
        /// Deviation CSV; defaults to `<out stem>.deviation.csv`.
        #[arg(long = "deviation-out")]
        deviation_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Dimension and homogeneous dimension of a Lie algebra.
    Hdim {
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        common: Common,
    },
    /// Size, upper-triangularity and properness of an ordered progression.
    ProgCheck {
        #[arg(long, conflicts_with = "algebra", required_unless_present = "algebra")]
        group: Option<String>,
        #[arg(long)]
        algebra: Option<String>,
        /// Ordered generators: `standard` or an element list.
        #[arg(long)]
        gens: Option<String>,
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<u64>,
        #[arg(long = "C", default_value = "1")]
        c: String,
        #[arg(long = "proper-m", default_value = "1")]
        proper_m: String,
        #[command(flatten)]
        common: Common,
    },
    /// Diagnostics for the S(j, k) family in the Heisenberg group.
    Heisenberg {
        #[command(subcommand)]
        command: HeisenbergCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum HeisenbergCommand {
    /// Compare S(i, j)^m with S(i, i^2)^m over a grid.
    Collapse {
        #[arg(long = "i-max", default_value_t = 3)]
        i_max: u64,
        #[arg(long = "j-max", default_value_t = 12)]
        j_max: u64,
        #[arg(long = "max-m", default_value_t = 12)]
        max_m: u64,
        #[command(flatten)]
        common: Common,
    },
    /// |S_n| and |S_n^n| for S_n = S(n, n^{3-a}), n^a ≈ f.
    ScaledFamily {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        n: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        f: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Rescaled word lengths d(e, δ_{Nq} g) / q in S(N, N^2).
    Cc {
        /// Points `u,v,w` separated by `;`.
        #[arg(long, default_value = "1,0,0;0,0,1;1,1,0")]
        points: String,
        /// Scales `N:q` separated by `,`.
        #[arg(long, default_value = "2:2,3:3,4:4,5:5")]
        scales: String,
        #[command(flatten)]
        common: Common,
    },
}

/// What a command produced: text for stdout and files to write.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    pub overflow: bool,
}

impl Output {
    /// Sends `body` to `out` when given, else to stdout.
    pub fn emit(&mut self, out: Option<&Path>, body: String) {
        match out {
            Some(p) => self.files.push((p.to_path_buf(), body)),
            None => self.stdout.push_str(&body),
        }
    }
}

/// Writes `contents` through a temporary file in the target directory and
/// renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let err = |source| CliError::Write { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(contents.as_bytes()).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

/// Runs a parsed command line to completion: writes files, prints, and
/// returns the exit status. Diagnostics go to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Status {
    let output = match commands::execute(cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return Status::Invalid;
        }
    };
    for (path, body) in &output.files {
        if let Err(e) = write_atomic(path, body) {
            let _ = writeln!(stderr, "error: {e}");
            return Status::Invalid;
        }
    }
    let _ = stdout.write_all(output.stdout.as_bytes());
    if output.overflow {
        let _ = writeln!(stderr, "budget exceeded; partial output written");
        Status::Overflow
    } else {
        Status::Ok
    }
}
