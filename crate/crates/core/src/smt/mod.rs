//! SMT-LIB v2 frontend with OMT extensions, over a hash-consed term DAG.

pub mod error;
mod parser;
mod printer;
pub mod script;
pub mod term;

pub use error::{SmtError, SmtErrorKind};
pub use parser::parse_smt2;
pub use printer::{print_smt2, print_term, Dialect};
pub use script::{
    father_counts, scripts_structurally_equal, term_structurally_equal, Combination,
    InertCommand, ObjDirection, Objective, SmtScript, SoftAssertion,
};
pub use term::{Op, Sort, TermArena, TermId, TermNode};
