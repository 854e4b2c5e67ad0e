//! Front end for `residue-core`: scenario documents in, deterministic CSV and
//! TOML reports out.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for an
//! invalid document or argument, 3 when evaluation or output fails.

pub mod doc;
pub mod report;
pub mod run;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_EXEC: i32 = 3;

/// Environment variable for the default output directory.
pub const OUT_ENV: &str = "RESIDUE_OUT";
