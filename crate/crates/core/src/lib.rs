//! Snake on graphs.

pub mod characterize;
pub mod game;
pub mod graph;
pub mod reduction;
pub mod solver;
pub mod strategies;
