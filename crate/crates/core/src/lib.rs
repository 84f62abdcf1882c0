//! Values, bounds and strategies for continuous patrolling and hiding games,
//! with a discretized matrix-game oracle to cross-check them.

pub mod discretize;
pub mod error;
pub mod geometry;
pub mod hiding;
pub mod matrixgame;
pub mod network;
pub mod patrol;
pub mod presets;
pub mod space;
pub mod strategy;
pub mod trajectory;

pub use error::{Error, Result};
pub use space::{SearchSpace, SpaceSpec};
pub use strategy::MixedStrategy;
