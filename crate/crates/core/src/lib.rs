//! A small dependent type checker with two interchangeable conversion
//! backends, plus benchmark generators and a timing harness for comparing
//! them.
//!
//! - [`syntax`]: core terms (de Bruijn indices), surface terms, printing.
//! - [`parser`]: the `.ett` surface grammar.
//! - [`eval`]: normalisation by evaluation with glued top-level values.
//! - [`conv`]: the syntax-directed and type-directed conversion checkers.
//! - [`elab`]: bidirectional elaboration, parameterised by [`Backend`].
//! - [`benchgen`]: deterministic program generators.
//! - [`harness`]: timed trials, CSV records and summaries.

pub mod benchgen;
pub mod conv;
pub mod elab;
pub mod eval;
pub mod harness;
pub mod parser;
pub mod syntax;

pub use conv::ConvError;
pub use elab::{check_program, check_program_with, Backend, CheckOptions, TypeError};
pub use eval::{Tops, UnfoldCounter, Value};
pub use parser::{parse_program, Diagnostic, RawProgram};
pub use syntax::{pretty, Term};
