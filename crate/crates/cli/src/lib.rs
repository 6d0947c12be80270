//! Command-line front end: an expression parser for algebra elements and the
//! subcommands that expose normalization and the verification suites.

pub mod app;
pub mod parse;
