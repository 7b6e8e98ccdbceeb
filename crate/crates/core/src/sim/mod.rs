//! Trace-driven replay of an assignment.

pub mod engine;
pub mod frame;
pub mod functions;
pub mod trace;
pub mod compare;

pub use engine::{run_sim, SimConfig, SimError, SimReport};
