//! Random small instances shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shm_offload::costs::{CostOrientation, Profile};
use shm_offload::model::{FunctionKind, NodeId, OperatorId, OperatorSpec, SensorId, Topology, Workload};
use shm_offload::reference::{apply_treq_rule, generate_profile, ProfileKnobs};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const ATOMIC_FUNCS: [FunctionKind; 7] = [
    FunctionKind::Mean,
    FunctionKind::Var,
    FunctionKind::Msqrt,
    FunctionKind::Max,
    FunctionKind::Range,
    FunctionKind::Last,
    FunctionKind::Filter,
];

pub fn spec(id: u32, sensors: Vec<SensorId>, deps: Vec<OperatorId>, func: FunctionKind, window: f64) -> OperatorSpec {
    OperatorSpec {
        id: OperatorId(id),
        sensors,
        deps,
        func,
        iterative: shm_offload::sim::functions::is_mergeable(func),
        window_s: window,
        step_s: window,
        freq_s: window,
        t_req_s: f64::INFINITY,
    }
}

/// Up to `max_atomic` atomic operators over up to three sensors on up to
/// two nodes, plus up to `max_composite` composites.
pub fn random_workload(r: &mut ChaCha8Rng, max_atomic: usize, max_composite: usize) -> Workload {
    let n_nodes = r.gen_range(1..=2u32);
    let n_sensors = r.gen_range(1..=3u32);
    let wiring: Vec<(SensorId, NodeId)> = (1..=n_sensors)
        .map(|s| (SensorId(s), NodeId(r.gen_range(1..=n_nodes))))
        .collect();
    let sensors: Vec<SensorId> = (1..=n_sensors).map(SensorId).collect();
    let n_atomic = r.gen_range(1..=max_atomic);
    let mut ops = Vec::new();
    for i in 0..n_atomic {
        let k = r.gen_range(1..=sensors.len().min(2));
        let mut chosen: Vec<SensorId> = sensors.choose_multiple(r, k).copied().collect();
        chosen.sort();
        let func = *ATOMIC_FUNCS.choose(r).unwrap();
        let window = *[1.0, 5.0, 10.0, 60.0].choose(r).unwrap();
        ops.push(spec(i as u32 + 1, chosen, vec![], func, window));
    }
    let n_comp = r.gen_range(0..=max_composite);
    for c in 0..n_comp {
        let avail: Vec<OperatorId> = ops.iter().map(|o| o.id).collect();
        let k = r.gen_range(1..=avail.len().min(2));
        let mut deps: Vec<OperatorId> = avail.choose_multiple(r, k).copied().collect();
        deps.sort();
        let func = if r.gen_bool(0.5) { FunctionKind::Trend } else { FunctionKind::Cc };
        ops.push(spec((n_atomic + c) as u32 + 1, vec![], deps, func, 60.0));
    }
    Workload::new(ops, Topology::from_wiring(wiring))
}

/// A profile with randomized rates and caps; latency bounds at a random
/// slack around the cloud-only latency.
pub fn random_profile(r: &mut ChaCha8Rng, w: &mut Workload) -> Profile {
    let knobs = ProfileKnobs {
        edge_unit: 10f64.powf(r.gen_range(7.0..9.5)),
        bandwidth: 10f64.powf(r.gen_range(3.0..6.5)),
        cpu_cap: 10f64.powf(r.gen_range(6.0..10.0)) as u64,
        mem_cap: 10f64.powf(r.gen_range(3.0..6.0)) as u64,
        ..ProfileKnobs::default()
    };
    let p = generate_profile(w, &knobs);
    let slack = r.gen_range(-0.6..1.0);
    apply_treq_rule(w, &p, slack, CostOrientation::Corrected).expect("generated profile is complete");
    p
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}
