//! Simulation and analysis of collective quantum heat engines built from
//! three-level two-stroke Otto units that hand coherence to one another
//! through population-preserving swaps.
//!
//! The crate is organised bottom-up:
//!
//! * [`qutrit`]: density matrices, entropies and the work-stroke rotation.
//! * [`thermal`]: Gibbs states, bath temperatures and the thermal stroke.
//! * [`engine`]: one engine unit, coherence extraction/injection and
//!   per-cycle entropy accounting.
//! * [`collective`]: the N-unit pipeline and its closed-form work laws.
//! * [`analysis`]: standalone baselines, scaling fits and sweep tables.
//! * [`config`] / [`experiment`]: the flat config format and the experiments
//!   driven from the command line.

pub mod analysis;
pub mod collective;
pub mod config;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod qutrit;
pub mod selftest;
pub mod table;
pub mod thermal;

pub use error::{Error, Result};
pub use qutrit::{BlochVector23, DensityMatrix3, ProbVector3};
pub use thermal::{BathPair, HeatLedger, LevelStructure};
