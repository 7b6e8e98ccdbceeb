//! Reference strategies: everything to the cloud, or everything possible
//! at the edge.

use crate::costs::{Gammas, Profile};
use crate::model::Workload;
use crate::solver::{Problem, Solution, SolveError, SolverConfig, SolverStats};

/// Every ratio at 1: raw data goes straight to the cloud.
pub fn cloud_only(w: &Workload, p: &Profile, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    let pb = Problem::new(w, p, cfg)?;
    let mut g = Gammas::empty(&pb.m);
    for i in 0..pb.m.op_count() {
        g.set(&pb.m, i, 1.0);
    }
    pb.finish(&g, SolverStats::default())
}

/// Ratio 0 wherever one edge node holds all inputs, 1 where it does not;
/// composites follow their dependencies.
pub fn edge_only(w: &Workload, p: &Profile, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    let pb = Problem::new(w, p, cfg)?;
    let mut g = Gammas::empty(&pb.m);
    for &i in &pb.st.order {
        if !pb.st.composite[i] {
            let v = if pb.st.forced[i].is_some() { 1.0 } else { 0.0 };
            g.set(&pb.m, i, v);
        }
    }
    pb.st.propagate(&pb.m, &mut g);
    pb.finish(&g, SolverStats::default())
}
