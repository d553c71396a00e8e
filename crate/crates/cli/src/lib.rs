//! Parsing and command layer behind the `wreathlab` binary.

pub mod commands;
pub mod parse;

pub use commands::{run_command, CommandKind, Workspace, DEFAULT_BUDGET};
pub use parse::{
    emit_point, parse_equation_file, parse_point, parse_semigroup, parse_system, parse_terms,
    ParseError,
};
