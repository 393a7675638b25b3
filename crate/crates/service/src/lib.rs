//! Service layer for latentwander archives: the `lw` command-line tool and
//! the HTTP API it serves.

pub mod api;
pub mod artifacts;
pub mod cli;

pub use api::{router, AppState};
pub use cli::{run, CliError};
