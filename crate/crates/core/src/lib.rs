//! Edge-cloud offload scheduling for windowed stream operators in
//! structural health monitoring, with a trace-driven simulator.

pub mod costs;
pub mod model;
pub mod feasibility;
pub mod solver;
pub mod baselines;
pub mod reference;
pub mod error;
pub mod io;
pub mod sim;
pub mod report;
pub mod cli;
