//! Input language, command dispatch and report rendering for the
//! `northcott` binary.

pub mod commands;
pub mod parser;
