//! The `omegacoalg` command line: approximations, bisimilarity,
//! minimization and self-checks for coalgebras given as JSON specs.

pub mod commands;
pub mod demo;
pub mod label;
pub mod render;
pub mod spec;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use label::CliLabel;
pub use spec::Spec;

/// Environment variable overriding the maximum accepted depth.
pub const MAX_DEPTH_VAR: &str = "OMEGACOALG_MAX_DEPTH";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {message}", if path.is_empty() { "document" } else { path.as_str() })]
    Invalid { path: String, message: String },
    #[error("{file}: {inner}")]
    InFile { file: String, inner: Box<CliError> },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("'{left}' has sort '{left_sort}' but '{right}' has sort '{right_sort}'")]
    SortMismatch {
        left: String,
        right: String,
        left_sort: String,
        right_sort: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] omegacoalg::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownState(_) => 3,
            CliError::InFile { inner, .. } => inner.exit_code(),
            _ => 2,
        }
    }

    pub(crate) fn in_file(self, path: &std::path::Path) -> Self {
        CliError::InFile {
            file: path.display().to_string(),
            inner: Box::new(self),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Exact: coarsest bisimulation by partition refinement.
    Partition,
    /// Compare approximations up to `--depth`.
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    Stream,
    Conat,
    Fig1,
    Parity,
}

#[derive(Debug, Parser)]
#[command(
    name = "omegacoalg",
    version,
    about = "Explore final coalgebras of containers through their finite approximations"
)]
pub struct Cli {
    /// Spec document (JSON).
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Observation depth.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the depth-n approximation of a state.
    Approx {
        #[arg(long)]
        state: String,
    },
    /// Decide bisimilarity of two states, or list the bisimilarity classes.
    Bisim {
        #[arg(requires = "right")]
        left: Option<String>,
        right: Option<String>,
        #[arg(long, value_enum, default_value_t = Algorithm::Partition)]
        algorithm: Algorithm,
        /// Second spec; states are compared in the disjoint union and
        /// named `left.NAME` and `right.NAME`.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Print the quotient by bisimilarity as a spec document.
    Minimize,
    /// Run the finality and bisimulation self-checks on a spec.
    Check,
    /// Print a built-in example spec.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
}

/// What a command printed and the exit code it asks for.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    pub(crate) fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

/// The depth bound: `OMEGACOALG_MAX_DEPTH` when set, otherwise the
/// library default.
pub fn depth_bound(var: Option<&str>) -> Result<usize, CliError> {
    match var {
        None => Ok(omegacoalg::mtype::DEFAULT_MAX_DEPTH),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_DEPTH_VAR} must be a non-negative integer, got '{v}'"))),
    }
}

fn check_depth(depth: usize, bound: usize) -> Result<usize, CliError> {
    if depth > bound {
        return Err(omegacoalg::Error::DepthBoundExceeded {
            requested: depth,
            bound,
        }
        .into());
    }
    Ok(depth)
}

fn load(path: Option<&PathBuf>) -> Result<Spec, CliError> {
    let path = path.ok_or_else(|| CliError::Usage("this command needs --spec PATH".into()))?;
    Spec::load(path)
}

pub fn run(cli: &Cli, bound: usize) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Approx { state } => {
            let depth = cli
                .depth
                .ok_or_else(|| CliError::Usage("approx needs --depth N".into()))?;
            let spec = load(cli.spec.as_ref())?;
            commands::approx(&spec, state, check_depth(depth, bound)?, cli.format)
        }
        Command::Bisim {
            left,
            right,
            algorithm,
            against,
        } => {
            let mut spec = load(cli.spec.as_ref())?;
            if let Some(other) = against {
                spec = spec.union(&Spec::load(other)?)?;
            }
            let depth = cli.depth.map(|d| check_depth(d, bound)).transpose()?;
            let pair = left.as_deref().zip(right.as_deref());
            commands::bisim(&spec, pair, *algorithm, depth, cli.format)
        }
        Command::Minimize => {
            let spec = load(cli.spec.as_ref())?;
            commands::minimize(&spec)
        }
        Command::Check => {
            let spec = load(cli.spec.as_ref())?;
            let depth = check_depth(cli.depth.unwrap_or(commands::DEFAULT_CHECK_DEPTH), bound)?;
            commands::check(&spec, depth, cli.format)
        }
        Command::Demo { name } => Ok(Outcome::ok(render::document(&demo::spec(*name).to_json()))),
    }
}
