//! Command-line interface: equation parsing, operator documents, the golden
//! corpus runner and the `annih` commands.

pub mod app;
pub mod corpus;
pub mod document;
pub mod parse;
