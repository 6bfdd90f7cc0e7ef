//! Library half of the `bvic` command-line tool: report rendering, SMT-LIB
//! benchmark emission, kernel self-check suites and external-solver
//! crosschecking. The thin argument-parsing front end lives in the binary.

pub mod checks;
pub mod crosscheck;
pub mod report;
pub mod smt;
