//! FlatZinc frontend: parsing, validation and printing.

pub mod ast;
pub mod builtins;
pub mod error;
mod lexer;
mod parser;
mod print;

pub use ast::*;
pub use error::{FznError, FznErrorKind};
pub use parser::parse_fzn;
pub use print::{print_fzn, print_fzn_with, FloatMode};
