//! Fairness-aware social influence maximization toolkit.
//!
//! Simulates stochastic information diffusion on group-labeled graphs,
//! scores outcomes with optimal-transport fairness metrics alongside the
//! classical ones, and selects seeds with baselines, fair heuristics, and
//! a Metropolis-sampled stochastic descent.

pub mod cli;
pub mod diffusion;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod rng;
pub mod seeding;

pub use error::{Error, Result};
