//! Front end for the constrained concept miner: the constraint language,
//! JSON-lines listings and command dispatch.

pub mod output;
pub mod run;
pub mod syntax;

pub use output::{read_concepts, render_concepts, Filter, Header, Record};
pub use run::{execute, load_database, run, run_to_string, CliError, Command, InputFormat, RunConfig};
pub use syntax::{parse_constraint, print_constraint, print_dual, print_projected, ParseError};
