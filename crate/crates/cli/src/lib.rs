//! Command-line tools and the local play service for `snakegraph`.

pub mod cache;
pub mod commands;
pub mod engine;
pub mod server;
