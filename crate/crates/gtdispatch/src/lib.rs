//! Economic gas-turbine dispatch: an hourly MDP environment with a
//! surrogate thermodynamic model, dynamic cycle/hour-based O&M cost
//! accounting, deep-RL agents and baselines, and an exact dynamic
//! programming oracle for validation.

pub mod agents;
pub mod config;
pub mod cost;
pub mod env;
pub mod error;
pub mod harness;
pub mod nn;
pub mod oracle;
pub mod scenario;
pub mod surrogate;

pub use error::{Error, Result};
