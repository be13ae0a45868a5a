//! Command-line front end for `ackloop-core`, plus the JSON encodings it
//! reads and writes.

pub mod app;
pub mod encode;

pub use app::{execute, Cli, Exit, Failure};
