//! File formats and command implementations for the `gvint` tool.
//!
//! [`workspace`] reads and writes JSON workspaces; [`commands`] runs
//! `validate`, `transform`, `check` and `hrr` on them and reports an
//! [`commands::Outcome`] carrying human text, a JSON verdict and an exit
//! status (0 success, 1 validation failure, 2 math-contract failure, 3 I/O).

pub mod commands;
pub mod workspace;
