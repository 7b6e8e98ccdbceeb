//! The 63-operator reference catalogue and a synthetic profile generator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::costs::{CostError, CostModel, CostOrientation, Gammas, Profile};
use crate::model::{FunctionKind, NodeId, OperatorId, OperatorSpec, SensorId, Topology, Workload};
use crate::sim::functions::{output_arity, state_len};

const BRIDGE_TYPES: [&str; 11] = [
    "RHS", "TMP", "UAN", "ULT", "WIM", "VIB", "VIC", "RSG", "HPT", "DPM", "GPS",
];
const CROSS_TYPES: [&str; 11] = [
    "HPT", "VIB", "VIC", "RSG", "RHS", "UAN", "TMP", "DPM", "GPS", "ULT", "FLX",
];
const MOTION_TYPES: [&str; 3] = ["GPS", "HPT", "DPM"];
const WINDOWS: [f64; 4] = [60.0, 600.0, 3600.0, 86400.0];

struct Builder {
    ops: Vec<OperatorSpec>,
    wiring: Vec<(SensorId, NodeId)>,
    labels: BTreeMap<SensorId, String>,
    next_sensor: u32,
}

impl Builder {
    fn family(&mut self, tag: &str, types: &[&str], node: u32) -> Vec<SensorId> {
        types
            .iter()
            .map(|t| {
                self.next_sensor += 1;
                let id = SensorId(self.next_sensor);
                self.wiring.push((id, NodeId(node)));
                self.labels.insert(id, format!("{tag}.{t}"));
                id
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        id: u32,
        sensors: &[SensorId],
        deps: &[u32],
        func: FunctionKind,
        iterative: bool,
        (window_s, step_s, freq_s): (f64, f64, f64),
    ) {
        self.ops.push(OperatorSpec {
            id: OperatorId(id),
            sensors: sensors.to_vec(),
            deps: deps.iter().map(|&d| OperatorId(d)).collect(),
            func,
            iterative,
            window_s,
            step_s,
            freq_s,
            t_req_s: f64::INFINITY,
        });
    }
}

/// The catalogue with latency bounds left unbounded.
///
/// Each group of four rows (or each single row) reads its own logical
/// sensors; the seven wind rows share one three-axis anemometer. Nodes are
/// assigned per dependency group so no operator spans two nodes.
pub fn reference_workload() -> Workload {
    use FunctionKind::*;
    let mut b = Builder {
        ops: Vec::new(),
        wiring: Vec::new(),
        labels: BTreeMap::new(),
        next_sensor: 0,
    };
    let simple = [
        (Mean, true),
        (Msqrt, true),
        (Max, false),
        (Min, false),
        (First, false),
        (Last, false),
        (Range, false),
        (Std, true),
        (Var, true),
    ];
    let mut row = 1;
    for (g, (func, iter)) in simple.into_iter().enumerate() {
        let node = g as u32 + 1;
        let sensors = b.family(&format!("r{row}"), &BRIDGE_TYPES, node);
        for w in WINDOWS {
            b.push(row, &sensors, &[], func, iter, (w, w, w));
            row += 1;
        }
    }
    let sensors = b.family("r37", &CROSS_TYPES, 10);
    for w in WINDOWS {
        b.push(row, &sensors, &[], Cov, true, (w, w, w));
        row += 1;
    }

    let motion = b.family("r41", &MOTION_TYPES, 11);
    for (n, w) in WINDOWS.into_iter().enumerate() {
        b.push(41 + n as u32, &motion, &[49 + n as u32], Speed, true, (w, w, w));
    }
    for (n, w) in WINDOWS.into_iter().enumerate() {
        b.push(45 + n as u32, &motion, &[41 + n as u32], Acc, true, (w, w, w));
    }
    for (n, w) in WINDOWS.into_iter().enumerate() {
        b.push(49 + n as u32, &motion, &[], Disp, true, (w, w, w));
    }

    let s = b.family("r53", &CROSS_TYPES, 12);
    b.push(53, &s, &[], Cc, false, (900.0, 300.0, 100.0));
    let s = b.family("r54", &CROSS_TYPES, 13);
    b.push(54, &s, &[], Filter, false, (10.0, 10.0, 10.0));
    let s = b.family("r55", &CROSS_TYPES, 1);
    b.push(55, &s, &[2], Trend, true, (600.0, 60.0, 60.0));
    let s = b.family("r56", &CROSS_TYPES, 14);
    b.push(56, &s, &[], Surge, true, (10.0, 1.0, 1.0));

    let wind = b.family("r57", &["UAN.x", "UAN.y", "UAN.z"], 1);
    let ten = (600.0, 600.0, 600.0);
    b.push(57, &wind, &[2], Avgws, true, ten);
    b.push(58, &wind, &[2, 57], Avgwa, false, ten);
    b.push(59, &wind, &[2], Gf, true, (3.0, 1.0, 1.0));
    b.push(60, &wind, &[57, 58], Fws, false, (1.0, 1.0, 1.0));
    b.push(61, &wind, &[57, 60], Ti, false, ten);
    b.push(62, &wind, &[2, 57], Aoa, true, ten);
    b.push(63, &wind, &[2], Awd, true, ten);

    let mut w = Workload::new(b.ops, Topology::from_wiring(b.wiring));
    w.sensor_labels = b.labels;
    w
}

/// Knobs of the synthetic profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileKnobs {
    pub sample_rate_hz: f64,
    pub bytes_per_sample: u64,
    pub edge_unit: f64,
    pub cloud_unit: f64,
    pub cloud_speedup: f64,
    pub bandwidth: f64,
    pub cpu_res: u64,
    pub mem_overhead: u64,
    pub cpu_cap: u64,
    pub mem_cap: u64,
    /// Seconds per gust block of the gust factor.
    pub gust_s: f64,
}

impl Default for ProfileKnobs {
    fn default() -> Self {
        ProfileKnobs {
            sample_rate_hz: 10.0,
            bytes_per_sample: 8,
            edge_unit: 1.5e9,
            cloud_unit: 3.2e9,
            cloud_speedup: 1.0,
            bandwidth: 1_560_000.0,
            cpu_res: 100_000,
            mem_overhead: 4096,
            cpu_cap: 360_000_000_000,
            mem_cap: 8 << 30,
            gust_s: 1.0,
        }
    }
}

/// Cycles spent per input sample.
pub fn cycles_per_sample(f: FunctionKind) -> u64 {
    use FunctionKind::*;
    match f {
        Mean => 2000,
        Msqrt => 2500,
        Max | Min | First | Last | Range => 1500,
        Std | Var => 4000,
        Cov => 6000,
        Speed | Acc => 3000,
        Disp => 2500,
        Cc => 60000,
        Filter => 25000,
        Trend => 40000,
        Surge => 30000,
        Avgws => 8000,
        Avgwa => 9000,
        Gf => 35000,
        Fws => 6000,
        Ti => 12000,
        Aoa => 11000,
        Awd => 9000,
    }
}

/// Synthetic per-entry costs for `w`; latency bounds are not touched.
pub fn generate_profile(w: &Workload, k: &ProfileKnobs) -> Profile {
    let mut p = Profile {
        cpu_unit_cloud: k.cloud_unit * k.cloud_speedup,
        ..Profile::default()
    };
    for n in &w.topology.nodes {
        p.cpu_unit_edge.insert(*n, k.edge_unit);
        p.bandwidth.insert(*n, k.bandwidth);
        p.cpu_cap.insert(*n, k.cpu_cap);
        p.mem_cap.insert(*n, k.mem_cap);
    }
    let gust = (k.gust_s * k.sample_rate_hz).round().max(1.0) as u64;
    for op in &w.operators {
        let samples = ((op.window_s * k.sample_rate_hz).round() as u64).max(1);
        let cycles = cycles_per_sample(op.func) * samples;
        for s in &op.sensors {
            let Some(node) = w.topology.node_of(*s) else { continue };
            p.cpu_edge.insert((op.id, *s, node), cycles);
            p.mem_edge.insert((op.id, *s, node), samples * k.bytes_per_sample + k.mem_overhead);
            p.data_raw.insert((op.id, *s, node), samples * k.bytes_per_sample);
            p.cpu_cloud.insert((op.id, *s), cycles);
        }
        let channels = op.sensors.len();
        let int = if op.iterative {
            state_len(op.func, channels, samples as usize, gust as usize) as u64 * 8
        } else {
            0
        };
        p.data_int.insert(op.id, int);
        p.data_res.insert(op.id, output_arity(op.func, channels) as u64 * 8);
        p.cpu_res.insert(op.id, k.cpu_res);
    }
    p
}

/// Sets each unbounded latency requirement to `(1 + slack)` times the
/// operator's cloud-only latency (waiting included).
pub fn apply_treq_rule(w: &mut Workload, p: &Profile, slack: f64, orientation: CostOrientation) -> Result<(), CostError> {
    let m = CostModel::new(w, p, orientation)?;
    let mut g = Gammas::empty(&m);
    for i in 0..m.op_count() {
        g.set(&m, i, 1.0);
    }
    let order = crate::costs::dense_order(w);
    let mut memo = vec![None; m.op_count()];
    for &i in &order {
        let t = m.latency_parts(i, &g, &memo)?.total();
        memo[i] = Some(t);
    }
    for (i, op) in w.operators.iter_mut().enumerate() {
        if op.t_req_s.is_infinite() {
            op.t_req_s = (1.0 + slack) * memo[i].expect("evaluated");
        }
    }
    Ok(())
}

/// Reference workload, its default profile and bounds at `slack`.
pub fn reference_instance(knobs: &ProfileKnobs, slack: f64) -> (Workload, Profile) {
    let mut w = reference_workload();
    let p = generate_profile(&w, knobs);
    apply_treq_rule(&mut w, &p, slack, CostOrientation::Corrected).expect("reference profile is complete");
    (w, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{topological_order, validate_workload};

    #[test]
    fn catalogue_shape() {
        let w = reference_workload();
        assert_eq!(w.operators.len(), 63);
        assert!(validate_workload(&w).is_valid());
        let ids: Vec<u32> = w.operators.iter().map(|o| o.id.0).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(sorted, (1..=63).collect::<Vec<_>>());
        for r in 1..=4 {
            let o = w.operator(OperatorId(r)).unwrap();
            assert_eq!(o.window_s, WINDOWS[r as usize - 1]);
            assert_eq!(o.func, FunctionKind::Mean);
        }
        let o2 = w.operator(OperatorId(2)).unwrap();
        assert_eq!((o2.window_s, o2.step_s, o2.freq_s), (600.0, 600.0, 600.0));
        let o58 = w.operator(OperatorId(58)).unwrap();
        assert_eq!(o58.func, FunctionKind::Avgwa);
        assert_eq!(o58.deps, vec![OperatorId(2), OperatorId(57)]);
        assert!(!o58.iterative);
        let o53 = w.operator(OperatorId(53)).unwrap();
        assert_eq!((o53.window_s, o53.step_s, o53.freq_s, o53.iterative), (900.0, 300.0, 100.0, false));
        let o56 = w.operator(OperatorId(56)).unwrap();
        assert_eq!((o56.window_s, o56.step_s, o56.freq_s, o56.iterative), (10.0, 1.0, 1.0, true));
        assert_eq!(w.operator(OperatorId(41)).unwrap().deps, vec![OperatorId(49)]);
        assert_eq!(w.operator(OperatorId(48)).unwrap().deps, vec![OperatorId(44)]);
    }

    #[test]
    fn catalogue_orders_wind_after_mean() {
        let w = reference_workload();
        let order = topological_order(&w).unwrap();
        let pos = |id| order.iter().position(|&o| o == OperatorId(id)).unwrap();
        assert!(pos(58) > pos(2) && pos(58) > pos(57));
        assert!(pos(61) > pos(60));
    }

    #[test]
    fn no_reference_operator_spans_nodes() {
        let w = reference_workload();
        for o in &w.operators {
            assert!(!crate::feasibility::forced_cloud(&w, o.id), "{}", o.id);
        }
    }

    #[test]
    fn profile_volumes_follow_sample_counts() {
        let w = reference_workload();
        let p = generate_profile(&w, &ProfileKnobs::default());
        let o2 = w.operator(OperatorId(2)).unwrap();
        let s = o2.sensors[0];
        let k = w.topology.node_of(s).unwrap();
        assert_eq!(p.data_raw[&(OperatorId(2), s, k)], 48_000);
        assert_eq!(p.bandwidth[&k], 1_560_000.0);
        assert_eq!(p.data_res[&OperatorId(2)], 11 * 8);
        assert_eq!(p.data_int[&OperatorId(2)], 22 * 8);
        assert!(p.check_complete(&w).is_empty());
    }

    #[test]
    fn treq_is_cloud_latency_plus_slack() {
        let (w, p) = reference_instance(&ProfileKnobs::default(), 0.10);
        let a = crate::costs::Assignment::uniform(&w, 1.0);
        let r = crate::costs::evaluate(&w, &p, &a, CostOrientation::Corrected, Default::default()).unwrap();
        for row in &r.operators {
            let o = w.operator(row.op).unwrap();
            assert!((o.t_req_s - 1.1 * row.t_total_s).abs() <= 1e-12 * o.t_req_s.max(1.0));
        }
    }
}
