//! Library side of the `randsec` command-line tool: file formats and the
//! command implementations.

pub mod commands;
pub mod error;
pub mod files;
