//! Command dispatch, independent of argument parsing.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use cproj_core::oracle::{brute_mine_bounded, DEFAULT_MAX_BITS};
use cproj_core::{
    all_concepts, load_dense, load_sparse, load_values, mine_concepts, write_dense, AttributeValues, BooleanDatabase,
    ConceptConstraint, ConstraintError, LoadError, MinerConfig, OracleError, ProjectionContext,
};
use thiserror::Error;

use crate::output::{render_concepts, Filter};
use crate::syntax::{parse_constraint, print_constraint, print_projected, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Concepts satisfying the constraint.
    Mine,
    /// Every concept.
    Concepts,
    /// Print the projected constraint.
    Project,
    /// Same output as `Mine`, by exhaustive enumeration.
    Oracle,
    /// Write the transposed matrix as dense CSV.
    Transpose,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum InputFormat {
    #[default]
    Dense,
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub format: InputFormat,
    pub values: Option<PathBuf>,
    pub constraint: Option<String>,
    pub output: Option<PathBuf>,
    pub filter: Filter,
    pub no_prune: bool,
    pub parallel: bool,
    /// Largest side the oracle enumerates.
    pub oracle_bits: usize,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        Self {
            command,
            input: input.into(),
            format: InputFormat::Dense,
            values: None,
            constraint: None,
            output: None,
            filter: Filter::default(),
            no_prune: false,
            parallel: false,
            oracle_bits: DEFAULT_MAX_BITS,
        }
    }

    fn miner(&self) -> MinerConfig {
        MinerConfig { prune_antimonotone: !self.no_prune, parallel_subtrees: self.parallel }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Load { path: PathBuf, source: LoadError },
    #[error("constraint: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl CliError {
    /// Process exit status. 2 is left to the argument parser.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 3,
            CliError::Load { .. } => 4,
            CliError::Parse(_) => 5,
            CliError::Config(_) | CliError::Constraint(_) => 6,
            CliError::Oracle(OracleError::Constraint(_)) => 6,
            CliError::Oracle(_) => 7,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn load_database(path: &Path, format: InputFormat) -> Result<BooleanDatabase, CliError> {
    let text = read(path)?;
    let loaded = match format {
        InputFormat::Dense => load_dense(&text),
        InputFormat::Sparse => load_sparse(&text),
    };
    loaded.map_err(|source| CliError::Load { path: path.to_path_buf(), source })
}

/// Run a command against an already loaded database.
pub fn execute(cfg: &RunConfig, db: &BooleanDatabase, values: Option<&AttributeValues>) -> Result<String, CliError> {
    let constraint = match (cfg.command, &cfg.constraint) {
        (Command::Concepts | Command::Transpose, Some(_)) => {
            return Err(CliError::Config("this command takes no constraint".into()));
        }
        (_, Some(text)) => parse_constraint(text, db)?,
        (_, None) => ConceptConstraint::True,
    };
    constraint.check_values(db, values)?;
    let canonical = print_constraint(&constraint, db);
    match cfg.command {
        Command::Mine => {
            let concepts = mine_concepts(db, &constraint, values, &cfg.miner())?;
            Ok(render_concepts(db, &canonical, &concepts, cfg.filter))
        }
        Command::Oracle => {
            let concepts = brute_mine_bounded(db, &constraint, values, cfg.oracle_bits)?;
            Ok(render_concepts(db, &canonical, &concepts, cfg.filter))
        }
        Command::Concepts => Ok(render_concepts(db, &canonical, &all_concepts(db), cfg.filter)),
        Command::Project => {
            let projected = ProjectionContext::new(db, values).project(&constraint)?;
            Ok(print_projected(&projected, db) + "\n")
        }
        Command::Transpose => Ok(write_dense(&db.transpose())),
    }
}

/// Load the inputs named by `cfg` and run the command.
pub fn run_to_string(cfg: &RunConfig) -> Result<String, CliError> {
    let db = load_database(&cfg.input, cfg.format)?;
    let values = match &cfg.values {
        Some(path) => {
            Some(load_values(&read(path)?, &db).map_err(|source| CliError::Load { path: path.clone(), source })?)
        }
        None => None,
    };
    execute(cfg, &db, values.as_ref())
}

/// Run and write the result to the output file or stdout.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let text = run_to_string(cfg)?;
    match &cfg.output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}
