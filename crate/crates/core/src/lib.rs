pub mod cardnet;
pub mod fzn;
pub mod fzn2omt;
pub mod mzn;
pub mod omt2mzn;
pub mod rational;
pub mod smt;
