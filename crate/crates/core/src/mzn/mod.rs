//! The MiniZinc subset the translator emits: AST, printer, parser,
//! exact evaluator, and the built-in flattener to FlatZinc.

pub mod ast;
pub mod eval;
pub mod flatten;
mod parser;
mod print;

pub use ast::*;
pub use eval::{eval_expr, EvalError, Value};
pub use flatten::{flatten_mzn, FlattenError};
pub use parser::{parse_mzn, MznParseError};
pub use print::{expr as print_expr, float_lit, print_mzn, MAX_FLOAT_DECIMAL_DIGITS};
