//! A curated collection of chaotic dynamical systems with a full numerical
//! pipeline: integration, timescale alignment, mathematical
//! characterization, standardized dataset generation, forecasting
//! baselines, importance-sampling training, and sparse symbolic model
//! recovery.

pub mod align;
pub mod characterize;
pub mod datagen;
pub mod error;
pub mod forecast;
pub mod importance;
pub mod inference;
pub mod integrate;
pub mod metrics;
pub mod registry;
pub mod trajectory;

pub use error::{ChaosError, Result};
