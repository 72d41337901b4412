//! Command-line front end for the finite-site internal-logic workbench:
//! versioned JSON document formats, the command dispatcher, and the corpus
//! cross-validation runner.

pub mod docs;
pub mod run;
