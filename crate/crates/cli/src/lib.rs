//! Command-line frontend: parsers and printers for the EM, AM and
//! annotation-function file formats, plus the command implementations
//! behind the `ppredelp` binary.

pub mod parse;
pub mod print;
pub mod run;
