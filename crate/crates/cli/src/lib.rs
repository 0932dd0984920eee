//! Configs, JSON reports and the acceptance suite behind the `hecke-padic`
//! binary.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod report;
