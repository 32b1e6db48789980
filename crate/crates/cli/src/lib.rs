//! Command-line front end for the imbalanced Kitaev chain.

pub mod commands;
pub mod config;
pub mod output;
