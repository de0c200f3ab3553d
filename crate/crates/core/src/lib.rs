//! Exact simulation of innovation diffusion among case-based decision-makers.
//!
//! Individuals evaluate an incumbent and a new product from the similarity
//! weighted record of everyone's past consumption, relative to a personal
//! aspiration level. All arithmetic is exact.

pub mod cli;
pub mod comparative;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod generate;
pub mod model;
pub mod oracle;
pub mod rational;

pub use error::{ComparativeError, DynamicsError, ModelError};
pub use model::{EvalMode, Instance, MarketState, NetworkSpec, Product};
pub use rational::Rational;
