//! Configuration, caching, chart files and the commands behind the
//! `adams-workbench` binary.

pub mod cache;
pub mod chart;
pub mod commands;
pub mod config;
pub mod error;
pub mod svg;
