//! Library half of the `entclt` command-line tool.

pub mod commands;
pub mod config;
pub mod output;
