//! Library surface of the `kernelscope` command-line tool: TOML run
//! configurations, the kernel family registry, report assembly, and the
//! subcommand runner. The binary in `main.rs` is a thin clap wrapper over
//! [`runner::execute`].

pub mod config;
pub mod report;
pub mod runner;
