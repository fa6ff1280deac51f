//! Lindblad-equation dynamics of finite-dimensional density matrices, with
//! certification of measurement-type generators and checks of their
//! late-time collapse onto Born-rule probabilities.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod liouvillian;
pub mod matrix;
pub mod measurement;
pub mod rng;
pub mod scenario_io;
pub mod tolerance;

pub use error::{Error, Result};
