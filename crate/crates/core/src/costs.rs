//! Analytic cost model: transmitted data per node, sensor-level offload
//! ratios, the four-part latency decomposition, and edge CPU/memory usage.
//!
//! The γ orientation is "fraction sent to the cloud": edge-side work scales
//! with `1 - γ` and cloud-side work with `γ`. [`CostOrientation::Literal`]
//! keeps the inverted printed forms available for comparison runs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{NodeId, OperatorId, OperatorSpec, Schedule, SensorId, Workload};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostOrientation {
    #[default]
    Corrected,
    Literal,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveMode {
    /// Sum of per-operator, per-node volumes as written.
    #[default]
    Paper,
    /// Each sensor's raw upload counted once.
    Dedup,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CostError {
    #[error("operator {0} has unequal offload ratios across its sensors")]
    UnequalSensorGamma(OperatorId),
    #[error("no offload ratio for operator {op} sensor {sensor:?}")]
    MissingGamma {
        op: OperatorId,
        sensor: Option<SensorId>,
    },
    #[error("latency of dependency {dep} of {op} not evaluated yet")]
    MissingDependencyLatency { op: OperatorId, dep: OperatorId },
    #[error("unknown operator {0}")]
    UnknownOperator(OperatorId),
    #[error("profile has no {what} for node {node}")]
    MissingNodeSpec { node: NodeId, what: &'static str },
}

/// Cost coefficients. Byte and cycle quantities are integers; unit rates
/// and bandwidths are per second.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Profile {
    pub cpu_edge: BTreeMap<(OperatorId, SensorId, NodeId), u64>,
    pub cpu_cloud: BTreeMap<(OperatorId, SensorId), u64>,
    pub cpu_res: BTreeMap<OperatorId, u64>,
    pub mem_edge: BTreeMap<(OperatorId, SensorId, NodeId), u64>,
    pub data_raw: BTreeMap<(OperatorId, SensorId, NodeId), u64>,
    pub data_int: BTreeMap<OperatorId, u64>,
    pub data_res: BTreeMap<OperatorId, u64>,
    pub cpu_unit_edge: BTreeMap<NodeId, f64>,
    pub cpu_unit_cloud: f64,
    pub bandwidth: BTreeMap<NodeId, f64>,
    pub cpu_cap: BTreeMap<NodeId, u64>,
    pub mem_cap: BTreeMap<NodeId, u64>,
}

impl Profile {
    /// Problems that make the profile unusable for `w`: missing or
    /// non-positive rates, missing per-operator or per-sensor entries.
    pub fn check_complete(&self, w: &Workload) -> Vec<String> {
        let mut problems = Vec::new();
        if !(self.cpu_unit_cloud > 0.0 && self.cpu_unit_cloud.is_finite()) {
            problems.push("cpu_unit_cloud must be positive".to_string());
        }
        for n in &w.topology.nodes {
            for (what, map) in [
                ("cpu_unit_edge", &self.cpu_unit_edge),
                ("bandwidth", &self.bandwidth),
            ] {
                match map.get(n) {
                    Some(v) if *v > 0.0 && v.is_finite() => {}
                    _ => problems.push(format!("node {n}: {what} missing or not positive")),
                }
            }
            if !self.cpu_cap.contains_key(n) {
                problems.push(format!("node {n}: cpu_cap missing"));
            }
            if !self.mem_cap.contains_key(n) {
                problems.push(format!("node {n}: mem_cap missing"));
            }
        }
        for op in &w.operators {
            for (what, map) in [
                ("cpu_res", &self.cpu_res),
                ("data_int", &self.data_int),
                ("data_res", &self.data_res),
            ] {
                if !map.contains_key(&op.id) {
                    problems.push(format!("operator {}: {what} missing", op.id));
                }
            }
            for s in &op.sensors {
                let Some(k) = w.topology.node_of(*s) else { continue };
                let key = (op.id, *s, k);
                for (what, map) in [
                    ("cpu_edge", &self.cpu_edge),
                    ("mem_edge", &self.mem_edge),
                    ("data_raw", &self.data_raw),
                ] {
                    if !map.contains_key(&key) {
                        problems.push(format!("({}, {s}, {k}): {what} missing", op.id));
                    }
                }
                if !self.cpu_cloud.contains_key(&(op.id, *s)) {
                    problems.push(format!("({}, {s}): cpu_cloud missing", op.id));
                }
            }
        }
        problems
    }
}

/// Offload ratios per (operator, sensor) and the derived per-sensor ratios.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "AssignmentRecord", try_from = "AssignmentRecord")]
pub struct Assignment {
    pub gamma_op: BTreeMap<(OperatorId, SensorId), f64>,
    /// Operators that read no sensors directly (pure composites).
    pub gamma_sensorless: BTreeMap<OperatorId, f64>,
    pub gamma_sensor: BTreeMap<SensorId, f64>,
}

impl Assignment {
    /// Sets one shared ratio on every sensor of `op`.
    pub fn set_operator(&mut self, op: &OperatorSpec, gamma: f64) {
        if op.sensors.is_empty() {
            self.gamma_sensorless.insert(op.id, gamma);
        } else {
            for s in &op.sensors {
                self.gamma_op.insert((op.id, *s), gamma);
            }
        }
    }

    /// The shared ratio of an operator (equal across its sensors).
    pub fn operator_gamma(&self, op: &OperatorSpec) -> Result<f64, CostError> {
        if op.sensors.is_empty() {
            return self
                .gamma_sensorless
                .get(&op.id)
                .copied()
                .ok_or(CostError::MissingGamma { op: op.id, sensor: None });
        }
        let mut value: Option<f64> = None;
        for s in &op.sensors {
            let g = *self.gamma_op.get(&(op.id, *s)).ok_or(CostError::MissingGamma {
                op: op.id,
                sensor: Some(*s),
            })?;
            match value {
                None => value = Some(g),
                Some(v) if (v - g).abs() <= GAMMA_TOL => {}
                Some(_) => return Err(CostError::UnequalSensorGamma(op.id)),
            }
        }
        Ok(value.expect("operator has sensors"))
    }

    /// Every operator at one ratio.
    pub fn uniform(w: &Workload, gamma: f64) -> Assignment {
        let mut a = Assignment::default();
        for op in &w.operators {
            a.set_operator(op, gamma);
        }
        derive_sensor_gamma(&a, w).expect("uniform assignment is complete")
    }
}

/// Absolute tolerance for γ domain and equality checks.
pub const GAMMA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GammaRecord {
    op: OperatorId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sensor: Option<SensorId>,
    gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SensorGammaRecord {
    sensor: SensorId,
    gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AssignmentRecord {
    gamma_op: Vec<GammaRecord>,
    #[serde(default)]
    gamma_sensor: Vec<SensorGammaRecord>,
}

impl From<Assignment> for AssignmentRecord {
    fn from(a: Assignment) -> Self {
        let mut gamma_op: Vec<GammaRecord> = a
            .gamma_op
            .iter()
            .map(|(&(op, s), &gamma)| GammaRecord {
                op,
                sensor: Some(s),
                gamma,
            })
            .chain(a.gamma_sensorless.iter().map(|(&op, &gamma)| GammaRecord {
                op,
                sensor: None,
                gamma,
            }))
            .collect();
        gamma_op.sort_by_key(|r| (r.op, r.sensor));
        AssignmentRecord {
            gamma_op,
            gamma_sensor: a
                .gamma_sensor
                .iter()
                .map(|(&sensor, &gamma)| SensorGammaRecord { sensor, gamma })
                .collect(),
        }
    }
}

impl TryFrom<AssignmentRecord> for Assignment {
    type Error = String;

    fn try_from(r: AssignmentRecord) -> Result<Self, Self::Error> {
        let mut a = Assignment::default();
        for g in r.gamma_op {
            let previous = match g.sensor {
                Some(s) => a.gamma_op.insert((g.op, s), g.gamma),
                None => a.gamma_sensorless.insert(g.op, g.gamma),
            };
            if previous.is_some() {
                return Err(format!("duplicate gamma for operator {}", g.op));
            }
        }
        for s in r.gamma_sensor {
            a.gamma_sensor.insert(s.sensor, s.gamma);
        }
        Ok(a)
    }
}

/// Fills `gamma_sensor` with the maximum ratio of each sensor's readers.
pub fn derive_sensor_gamma(a: &Assignment, w: &Workload) -> Result<Assignment, CostError> {
    let mut out = a.clone();
    out.gamma_sensor.clear();
    for op in &w.operators {
        for s in &op.sensors {
            let g = *a.gamma_op.get(&(op.id, *s)).ok_or(CostError::MissingGamma {
                op: op.id,
                sensor: Some(*s),
            })?;
            let e = out.gamma_sensor.entry(*s).or_insert(g);
            *e = e.max(g);
        }
        if op.sensors.is_empty() && !a.gamma_sensorless.contains_key(&op.id) {
            return Err(CostError::MissingGamma { op: op.id, sensor: None });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorCost {
    pub op: OperatorId,
    pub gamma: f64,
    pub data_bytes: BTreeMap<NodeId, f64>,
    pub t_edge_s: f64,
    pub t_trans_s: f64,
    pub t_wait_s: f64,
    pub t_cloud_s: f64,
    pub t_total_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeUsage {
    pub node: NodeId,
    pub cpu_cycles: f64,
    pub mem_bytes: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub operators: Vec<OperatorCost>,
    pub nodes: Vec<NodeUsage>,
    pub objective_bytes: f64,
}

/// One (operator, sensor) pairing with its coefficients.
#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub sensor: usize,
    pub node: usize,
    pub cpu_edge: f64,
    pub cpu_cloud: f64,
    pub mem_edge: f64,
    pub data_raw: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct OpCosts {
    pub id: OperatorId,
    pub entries: Vec<Entry>,
    pub deps: Vec<usize>,
    pub cpu_res: f64,
    pub data_int: f64,
    pub data_res: f64,
    /// Nodes whose link carries this operator's traffic, ascending.
    pub nodes: Vec<usize>,
    pub home: Option<usize>,
    pub t_req: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct NodeCosts {
    pub id: NodeId,
    pub unit: f64,
    pub bandwidth: f64,
    pub cpu_cap: f64,
    pub mem_cap: f64,
}

/// Dense, index-based view of (workload, profile) used by every cost
/// evaluation. Operator indices follow workload declaration order.
#[derive(Debug, Clone)]
pub struct CostModel {
    pub(crate) ops: Vec<OpCosts>,
    pub(crate) nodes: Vec<NodeCosts>,
    pub(crate) sensors: Vec<SensorId>,
    /// Operators reading each sensor.
    pub(crate) readers: Vec<Vec<usize>>,
    /// Largest per-window raw volume of each sensor across its readers.
    pub(crate) sensor_raw: Vec<f64>,
    pub(crate) cpu_unit_cloud: f64,
    pub orientation: CostOrientation,
}

impl CostModel {
    pub fn new(w: &Workload, p: &Profile, orientation: CostOrientation) -> Result<Self, CostError> {
        let node_ids: Vec<NodeId> = w.topology.nodes.iter().copied().collect();
        let node_index: BTreeMap<NodeId, usize> =
            node_ids.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut nodes = Vec::with_capacity(node_ids.len());
        for &id in &node_ids {
            let unit = *p
                .cpu_unit_edge
                .get(&id)
                .ok_or(CostError::MissingNodeSpec { node: id, what: "cpu_unit_edge" })?;
            let bandwidth = *p
                .bandwidth
                .get(&id)
                .ok_or(CostError::MissingNodeSpec { node: id, what: "bandwidth" })?;
            nodes.push(NodeCosts {
                id,
                unit,
                bandwidth,
                cpu_cap: p.cpu_cap.get(&id).map_or(f64::INFINITY, |&c| c as f64),
                mem_cap: p.mem_cap.get(&id).map_or(f64::INFINITY, |&c| c as f64),
            });
        }

        let sensors: Vec<SensorId> = w.sensors.iter().copied().collect();
        let sensor_index: BTreeMap<SensorId, usize> =
            sensors.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let op_index = w.index();
        let mut readers = vec![Vec::new(); sensors.len()];
        let mut sensor_raw = vec![0.0f64; sensors.len()];

        let mut ops = Vec::with_capacity(w.operators.len());
        for (oi, op) in w.operators.iter().enumerate() {
            let mut entries = Vec::with_capacity(op.sensors.len());
            for s in &op.sensors {
                let Some(k) = w.topology.node_of(*s) else { continue };
                let (Some(&si), Some(&ki)) = (sensor_index.get(s), node_index.get(&k)) else {
                    continue;
                };
                let key = (op.id, *s, k);
                let e = Entry {
                    sensor: si,
                    node: ki,
                    cpu_edge: p.cpu_edge.get(&key).copied().unwrap_or(0) as f64,
                    cpu_cloud: p.cpu_cloud.get(&(op.id, *s)).copied().unwrap_or(0) as f64,
                    mem_edge: p.mem_edge.get(&key).copied().unwrap_or(0) as f64,
                    data_raw: p.data_raw.get(&key).copied().unwrap_or(0) as f64,
                };
                readers[si].push(oi);
                sensor_raw[si] = sensor_raw[si].max(e.data_raw);
                entries.push(e);
            }
            let home = w.home_node(op).and_then(|n| node_index.get(&n).copied());
            let mut op_nodes: BTreeSet<usize> = entries.iter().map(|e| e.node).collect();
            if op_nodes.is_empty() {
                op_nodes.extend(home);
            }
            ops.push(OpCosts {
                id: op.id,
                entries,
                deps: op.deps.iter().filter_map(|d| op_index.get(d).copied()).collect(),
                cpu_res: p.cpu_res.get(&op.id).copied().unwrap_or(0) as f64,
                data_int: p.data_int.get(&op.id).copied().unwrap_or(0) as f64,
                data_res: p.data_res.get(&op.id).copied().unwrap_or(0) as f64,
                nodes: op_nodes.into_iter().collect(),
                home,
                t_req: op.t_req_s,
            });
        }
        for r in &mut readers {
            r.dedup();
        }
        Ok(CostModel {
            ops,
            nodes,
            sensors,
            readers,
            sensor_raw,
            cpu_unit_cloud: p.cpu_unit_cloud,
            orientation,
        })
    }

    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_id(&self, k: usize) -> NodeId {
        self.nodes[k].id
    }

    pub fn op_id(&self, i: usize) -> OperatorId {
        self.ops[i].id
    }

    fn edge_factor(&self, g: f64) -> f64 {
        match self.orientation {
            CostOrientation::Corrected => 1.0 - g,
            CostOrientation::Literal => g,
        }
    }

    /// Edge seconds of operator `i` on node `k`.
    pub fn edge_time_node(&self, i: usize, k: usize, g: &Gammas) -> f64 {
        let sum: f64 = self.ops[i]
            .entries
            .iter()
            .zip(&g.entry[i])
            .filter(|(e, _)| e.node == k)
            .map(|(e, &gij)| e.cpu_edge * self.edge_factor(gij))
            .sum();
        sum / self.nodes[k].unit
    }

    pub fn edge_time(&self, i: usize, g: &Gammas) -> f64 {
        self.ops[i]
            .nodes
            .iter()
            .map(|&k| self.edge_time_node(i, k, g))
            .fold(0.0, f64::max)
    }

    /// Bytes crossing node `k`'s link for operator `i`.
    pub fn data_volume(&self, i: usize, k: usize, g: &Gammas) -> Result<f64, CostError> {
        let op = &self.ops[i];
        let gi = g.op_value(i).ok_or(CostError::UnequalSensorGamma(op.id))?;
        let raw: f64 = op
            .entries
            .iter()
            .filter(|e| e.node == k)
            .map(|e| e.data_raw * g.sensor[e.sensor])
            .sum();
        let mut total = raw;
        if op.home == Some(k) {
            total += self.int_res_bytes(i, gi);
        }
        Ok(total)
    }

    /// Intermediate plus final-result bytes at ratio `gi`.
    pub(crate) fn int_res_bytes(&self, i: usize, gi: f64) -> f64 {
        let op = &self.ops[i];
        let int_coef = gi.ceil() - gi.floor();
        let res_coef = (1.0 - gi).floor();
        int_coef * op.data_int + res_coef * op.data_res
    }

    pub fn trans_time(&self, i: usize, g: &Gammas) -> Result<f64, CostError> {
        let mut t: f64 = 0.0;
        for &k in &self.ops[i].nodes {
            t = t.max(self.data_volume(i, k, g)? / self.nodes[k].bandwidth);
        }
        Ok(t)
    }

    pub fn cloud_time(&self, i: usize, g: &Gammas) -> Result<f64, CostError> {
        let op = &self.ops[i];
        let gi = g.op_value(i).ok_or(CostError::UnequalSensorGamma(op.id))?;
        let cycles = match self.orientation {
            CostOrientation::Corrected => {
                let work: f64 = op
                    .entries
                    .iter()
                    .zip(&g.entry[i])
                    .map(|(e, &gij)| e.cpu_cloud * gij)
                    .sum();
                work + if gi > 0.0 { op.cpu_res } else { 0.0 }
            }
            CostOrientation::Literal => {
                let work: f64 = op
                    .entries
                    .iter()
                    .zip(&g.entry[i])
                    .map(|(e, &gij)| e.cpu_cloud * (1.0 - gij))
                    .sum();
                work + op.cpu_res
            }
        };
        Ok(cycles / self.cpu_unit_cloud)
    }

    /// Spread between the slowest and fastest dependency.
    pub fn wait_time(&self, i: usize, memo: &[Option<f64>]) -> Result<f64, CostError> {
        let op = &self.ops[i];
        if op.deps.is_empty() {
            return Ok(0.0);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &d in &op.deps {
            let t = memo[d].ok_or(CostError::MissingDependencyLatency {
                op: op.id,
                dep: self.ops[d].id,
            })?;
            lo = lo.min(t);
            hi = hi.max(t);
        }
        Ok(hi - lo)
    }

    pub fn latency_parts(
        &self,
        i: usize,
        g: &Gammas,
        memo: &[Option<f64>],
    ) -> Result<LatencyParts, CostError> {
        Ok(LatencyParts {
            edge: self.edge_time(i, g),
            trans: self.trans_time(i, g)?,
            wait: self.wait_time(i, memo)?,
            cloud: self.cloud_time(i, g)?,
        })
    }

    pub fn node_cpu(&self, i: usize, k: usize, g: &Gammas) -> f64 {
        self.ops[i]
            .entries
            .iter()
            .zip(&g.entry[i])
            .filter(|(e, _)| e.node == k)
            .map(|(e, &gij)| e.cpu_edge * self.edge_factor(gij))
            .sum()
    }

    pub fn node_mem(&self, i: usize, k: usize, g: &Gammas) -> f64 {
        self.ops[i]
            .entries
            .iter()
            .zip(&g.entry[i])
            .filter(|(e, _)| e.node == k)
            .map(|(e, &gij)| e.mem_edge * self.edge_factor(gij))
            .sum()
    }

    /// Objective over the operators marked in `include` (all if `None`).
    /// Undetermined operators contribute nothing.
    pub fn objective_over(
        &self,
        g: &Gammas,
        mode: ObjectiveMode,
        include: Option<&[bool]>,
    ) -> Result<f64, CostError> {
        let included = |i: usize| include.map_or(true, |m| m[i]);
        let mut total = 0.0;
        match mode {
            ObjectiveMode::Paper => {
                for i in 0..self.ops.len() {
                    if !included(i) || !g.determined[i] {
                        continue;
                    }
                    for &k in &self.ops[i].nodes {
                        total += self.data_volume(i, k, g)?;
                    }
                }
            }
            ObjectiveMode::Dedup => {
                for s in 0..self.sensors.len() {
                    if self.readers[s].iter().any(|&i| included(i)) {
                        total += self.sensor_raw[s] * g.sensor[s];
                    }
                }
                for i in 0..self.ops.len() {
                    if !included(i) || !g.determined[i] {
                        continue;
                    }
                    let gi = g
                        .op_value(i)
                        .ok_or(CostError::UnequalSensorGamma(self.ops[i].id))?;
                    total += self.int_res_bytes(i, gi);
                }
            }
        }
        Ok(total)
    }

    pub fn objective(&self, g: &Gammas, mode: ObjectiveMode) -> Result<f64, CostError> {
        self.objective_over(g, mode, None)
    }

    /// Full evaluation in dependency order.
    pub fn evaluate(
        &self,
        g: &Gammas,
        order: &[usize],
        mode: ObjectiveMode,
    ) -> Result<CostReport, CostError> {
        let mut memo = vec![None; self.ops.len()];
        let mut rows: Vec<Option<OperatorCost>> = vec![None; self.ops.len()];
        for &i in order {
            let parts = self.latency_parts(i, g, &memo)?;
            let total = parts.total();
            memo[i] = Some(total);
            let mut data_bytes = BTreeMap::new();
            for &k in &self.ops[i].nodes {
                data_bytes.insert(self.nodes[k].id, self.data_volume(i, k, g)?);
            }
            rows[i] = Some(OperatorCost {
                op: self.ops[i].id,
                gamma: g.op_value(i).unwrap_or(f64::NAN),
                data_bytes,
                t_edge_s: parts.edge,
                t_trans_s: parts.trans,
                t_wait_s: parts.wait,
                t_cloud_s: parts.cloud,
                t_total_s: total,
            });
        }
        let nodes = (0..self.nodes.len())
            .map(|k| NodeUsage {
                node: self.nodes[k].id,
                cpu_cycles: (0..self.ops.len()).map(|i| self.node_cpu(i, k, g)).sum(),
                mem_bytes: (0..self.ops.len()).map(|i| self.node_mem(i, k, g)).sum(),
            })
            .collect();
        Ok(CostReport {
            operators: rows.into_iter().flatten().collect(),
            nodes,
            objective_bytes: self.objective(g, mode)?,
        })
    }

    /// Dense ratios from a public assignment. Missing entries are an error;
    /// unequal per-sensor ratios are kept and surface on first use.
    pub fn gammas(&self, w: &Workload, a: &Assignment) -> Result<Gammas, CostError> {
        let mut g = Gammas::empty(self);
        for (i, op) in w.operators.iter().enumerate() {
            if op.sensors.is_empty() {
                let v = *a
                    .gamma_sensorless
                    .get(&op.id)
                    .ok_or(CostError::MissingGamma { op: op.id, sensor: None })?;
                g.op[i] = v;
                g.determined[i] = true;
                continue;
            }
            let mut values = Vec::with_capacity(self.ops[i].entries.len());
            for e in &self.ops[i].entries {
                let s = self.sensors[e.sensor];
                let v = *a.gamma_op.get(&(op.id, s)).ok_or(CostError::MissingGamma {
                    op: op.id,
                    sensor: Some(s),
                })?;
                values.push(v);
            }
            let first = values.first().copied().unwrap_or(0.0);
            let equal = values.iter().all(|v| (v - first).abs() <= GAMMA_TOL);
            g.op[i] = if equal { first } else { f64::NAN };
            g.entry[i] = values;
            g.determined[i] = true;
        }
        g.refresh_sensors(self);
        Ok(g)
    }

    /// Public assignment from dense ratios of determined operators.
    pub fn assignment(&self, w: &Workload, g: &Gammas) -> Assignment {
        let mut a = Assignment::default();
        for (i, op) in w.operators.iter().enumerate() {
            if !g.determined[i] {
                continue;
            }
            if op.sensors.is_empty() {
                a.gamma_sensorless.insert(op.id, g.op[i]);
            }
            for (e, &v) in self.ops[i].entries.iter().zip(&g.entry[i]) {
                a.gamma_op.insert((op.id, self.sensors[e.sensor]), v);
            }
        }
        for (s, readers) in self.readers.iter().enumerate() {
            if readers.iter().any(|&i| g.determined[i]) {
                a.gamma_sensor.insert(self.sensors[s], g.sensor[s]);
            }
        }
        a
    }

    /// Analytic bytes for a simulated horizon of `horizon` samples at
    /// `rate_hz`: per-window terms scaled by window and emission counts.
    /// Dedup mode charges each sensor's raw stream once over the union of
    /// windows that need it at the cloud.
    pub fn horizon_bytes(
        &self,
        w: &Workload,
        g: &Gammas,
        horizon: u64,
        rate_hz: f64,
        mode: ObjectiveMode,
    ) -> Result<f64, CostError> {
        let schedules: Vec<Schedule> = w
            .operators
            .iter()
            .map(|o| Schedule::new(o, rate_hz))
            .collect();
        let mut total = 0.0;
        for i in 0..self.ops.len() {
            let sch = schedules[i];
            let gi = g
                .op_value(i)
                .ok_or(CostError::UnequalSensorGamma(self.ops[i].id))?;
            let op = &self.ops[i];
            let windows = sch.windows_within(horizon) as f64;
            let emissions = sch.emissions_within(horizon) as f64;
            total += (gi.ceil() - gi.floor()) * op.data_int * windows;
            total += (1.0 - gi).floor() * op.data_res * emissions;
            if mode == ObjectiveMode::Paper {
                let raw: f64 = op.entries.iter().map(|e| e.data_raw * g.sensor[e.sensor]).sum();
                total += raw * windows;
            }
        }
        if mode == ObjectiveMode::Dedup {
            for s in 0..self.sensors.len() {
                let mut spans: Vec<(u64, u64)> = Vec::new();
                let mut per_sample: f64 = 0.0;
                for &i in &self.readers[s] {
                    if !(g.op[i] > 0.0) {
                        continue;
                    }
                    let sch = schedules[i];
                    let e = self.ops[i]
                        .entries
                        .iter()
                        .find(|e| e.sensor == s)
                        .expect("reader has entry");
                    per_sample = per_sample.max(e.data_raw / sch.window as f64);
                    for win in 0..sch.windows_within(horizon) {
                        spans.push((sch.start(win), sch.close(win)));
                    }
                }
                total += g.sensor[s] * per_sample * union_length(&mut spans) as f64;
            }
        }
        Ok(total)
    }
}

/// Total length of a set of half-open spans.
pub(crate) fn union_length(spans: &mut [(u64, u64)]) -> u64 {
    spans.sort_unstable();
    let mut covered = 0;
    let mut cur: Option<(u64, u64)> = None;
    for &(a, b) in spans.iter() {
        match cur {
            Some((ca, cb)) if a <= cb => cur = Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                covered += cb - ca;
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    if let Some((ca, cb)) = cur {
        covered += cb - ca;
    }
    covered
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyParts {
    pub edge: f64,
    pub trans: f64,
    pub wait: f64,
    pub cloud: f64,
}

impl LatencyParts {
    pub fn total(&self) -> f64 {
        self.edge + self.trans + self.wait + self.cloud
    }
}

/// Dense offload ratios aligned with a [`CostModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gammas {
    /// Shared per-operator ratio; NaN when the sensors disagree.
    pub op: Vec<f64>,
    pub entry: Vec<Vec<f64>>,
    /// Max over determined readers.
    pub sensor: Vec<f64>,
    pub determined: Vec<bool>,
}

impl Gammas {
    pub fn empty(m: &CostModel) -> Self {
        Gammas {
            op: vec![0.0; m.ops.len()],
            entry: m.ops.iter().map(|o| vec![0.0; o.entries.len()]).collect(),
            sensor: vec![0.0; m.sensors.len()],
            determined: vec![false; m.ops.len()],
        }
    }

    pub fn op_value(&self, i: usize) -> Option<f64> {
        let v = self.op[i];
        (!v.is_nan()).then_some(v)
    }

    /// Marks operator `i` determined at ratio `v` and raises its sensors.
    pub fn set(&mut self, m: &CostModel, i: usize, v: f64) {
        self.op[i] = v;
        self.entry[i].iter_mut().for_each(|x| *x = v);
        self.determined[i] = true;
        for e in &m.ops[i].entries {
            if self.sensor[e.sensor] < v {
                self.sensor[e.sensor] = v;
            }
        }
    }

    /// Undoes [`Gammas::set`] for `i`, recomputing its sensors' maxima.
    pub fn unset(&mut self, m: &CostModel, i: usize) {
        self.determined[i] = false;
        for e in &m.ops[i].entries {
            let s = e.sensor;
            self.sensor[s] = m.readers[s]
                .iter()
                .filter(|&&r| self.determined[r])
                .flat_map(|&r| {
                    m.ops[r]
                        .entries
                        .iter()
                        .zip(&self.entry[r])
                        .filter(move |(e2, _)| e2.sensor == s)
                        .map(|(_, &v)| v)
                })
                .fold(0.0, f64::max);
        }
    }

    pub fn refresh_sensors(&mut self, m: &CostModel) {
        self.sensor.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..m.ops.len() {
            if !self.determined[i] {
                continue;
            }
            for (e, &v) in m.ops[i].entries.iter().zip(&self.entry[i]) {
                if self.sensor[e.sensor] < v {
                    self.sensor[e.sensor] = v;
                }
            }
        }
    }
}

// Convenience entry points on the public types. Each call compiles a fresh
// `CostModel`; hot loops should build one model and reuse it.

fn model_and_gammas(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    orientation: CostOrientation,
) -> Result<(CostModel, Gammas), CostError> {
    let m = CostModel::new(w, p, orientation)?;
    let g = m.gammas(w, a)?;
    Ok((m, g))
}

fn op_pos(w: &Workload, i: OperatorId) -> Result<usize, CostError> {
    w.operators
        .iter()
        .position(|o| o.id == i)
        .ok_or(CostError::UnknownOperator(i))
}

fn node_pos(m: &CostModel, k: NodeId) -> Result<usize, CostError> {
    m.nodes
        .iter()
        .position(|n| n.id == k)
        .ok_or(CostError::MissingNodeSpec { node: k, what: "topology entry" })
}

pub fn data_volume(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    i: OperatorId,
    k: NodeId,
) -> Result<f64, CostError> {
    let (m, g) = model_and_gammas(w, p, a, CostOrientation::Corrected)?;
    m.data_volume(op_pos(w, i)?, node_pos(&m, k)?, &g)
}

pub fn edge_time(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    i: OperatorId,
    orientation: CostOrientation,
) -> Result<f64, CostError> {
    let (m, g) = model_and_gammas(w, p, a, orientation)?;
    Ok(m.edge_time(op_pos(w, i)?, &g))
}

pub fn trans_time(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    i: OperatorId,
) -> Result<f64, CostError> {
    let (m, g) = model_and_gammas(w, p, a, CostOrientation::Corrected)?;
    m.trans_time(op_pos(w, i)?, &g)
}

pub fn cloud_time(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    i: OperatorId,
    orientation: CostOrientation,
) -> Result<f64, CostError> {
    let (m, g) = model_and_gammas(w, p, a, orientation)?;
    m.cloud_time(op_pos(w, i)?, &g)
}

/// Dependency spread; `memo` must hold the total latency of every dependency.
pub fn wait_time(
    w: &Workload,
    i: OperatorId,
    memo: &BTreeMap<OperatorId, f64>,
) -> Result<f64, CostError> {
    let op = w.operator(i).ok_or(CostError::UnknownOperator(i))?;
    if op.deps.is_empty() {
        return Ok(0.0);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for d in &op.deps {
        let t = *memo
            .get(d)
            .ok_or(CostError::MissingDependencyLatency { op: i, dep: *d })?;
        lo = lo.min(t);
        hi = hi.max(t);
    }
    Ok(hi - lo)
}

/// Four-part latency of `i`; stores the total into `memo`.
pub fn total_latency(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    i: OperatorId,
    orientation: CostOrientation,
    memo: &mut BTreeMap<OperatorId, f64>,
) -> Result<f64, CostError> {
    let (m, g) = model_and_gammas(w, p, a, orientation)?;
    let pos = op_pos(w, i)?;
    let t = m.edge_time(pos, &g) + m.trans_time(pos, &g)? + wait_time(w, i, memo)? + m.cloud_time(pos, &g)?;
    memo.insert(i, t);
    Ok(t)
}

pub fn node_cpu(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    i: OperatorId,
    k: NodeId,
    orientation: CostOrientation,
) -> Result<f64, CostError> {
    let (m, g) = model_and_gammas(w, p, a, orientation)?;
    Ok(m.node_cpu(op_pos(w, i)?, node_pos(&m, k)?, &g))
}

pub fn node_mem(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    i: OperatorId,
    k: NodeId,
    orientation: CostOrientation,
) -> Result<f64, CostError> {
    let (m, g) = model_and_gammas(w, p, a, orientation)?;
    Ok(m.node_mem(op_pos(w, i)?, node_pos(&m, k)?, &g))
}

pub fn total_objective(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    mode: ObjectiveMode,
) -> Result<f64, CostError> {
    let (m, g) = model_and_gammas(w, p, a, CostOrientation::Corrected)?;
    m.objective(&g, mode)
}

/// Cost breakdown of a complete assignment.
pub fn evaluate(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    orientation: CostOrientation,
    mode: ObjectiveMode,
) -> Result<CostReport, CostError> {
    let (m, g) = model_and_gammas(w, p, a, orientation)?;
    let order = dense_order(w);
    m.evaluate(&g, &order, mode)
}

/// Topological order as dense indices (declaration order on cyclic input).
pub(crate) fn dense_order(w: &Workload) -> Vec<usize> {
    let index = w.index();
    match crate::model::topological_order(w) {
        Ok(order) => order.iter().map(|id| index[id]).collect(),
        Err(_) => (0..w.operators.len()).collect(),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::{FunctionKind, Topology};

    pub(crate) fn single(
        d_raw: u64,
        d_int: u64,
        d_res: u64,
        cpu_edge: u64,
        cpu_cloud: u64,
        cpu_res: u64,
    ) -> (Workload, Profile) {
        let op = OperatorSpec {
            id: OperatorId(1),
            sensors: vec![SensorId(1)],
            deps: vec![],
            func: FunctionKind::Mean,
            iterative: true,
            window_s: 60.0,
            step_s: 60.0,
            freq_s: 60.0,
            t_req_s: f64::INFINITY,
        };
        let w = Workload::new(vec![op], Topology::from_wiring([(SensorId(1), NodeId(1))]));
        let mut p = Profile {
            cpu_unit_cloud: 3e9,
            ..Profile::default()
        };
        let key = (OperatorId(1), SensorId(1), NodeId(1));
        p.data_raw.insert(key, d_raw);
        p.cpu_edge.insert(key, cpu_edge);
        p.mem_edge.insert(key, 4096);
        p.cpu_cloud.insert((OperatorId(1), SensorId(1)), cpu_cloud);
        p.cpu_res.insert(OperatorId(1), cpu_res);
        p.data_int.insert(OperatorId(1), d_int);
        p.data_res.insert(OperatorId(1), d_res);
        p.cpu_unit_edge.insert(NodeId(1), 1.5e9);
        p.bandwidth.insert(NodeId(1), 1_560_000.0);
        p.cpu_cap.insert(NodeId(1), u64::MAX);
        p.mem_cap.insert(NodeId(1), u64::MAX);
        (w, p)
    }

    fn at(w: &Workload, g: f64) -> Assignment {
        Assignment::uniform(w, g)
    }

    #[test]
    fn sensor_gamma_is_pointwise_max() {
        let (mut w, _) = single(800, 64, 8, 0, 0, 0);
        let mut o2 = w.operators[0].clone();
        o2.id = OperatorId(2);
        let mut o3 = o2.clone();
        o3.id = OperatorId(3);
        w.operators.push(o2);
        w.operators.push(o3);
        let mut a = Assignment::default();
        a.gamma_op.insert((OperatorId(1), SensorId(1)), 0.3);
        a.gamma_op.insert((OperatorId(2), SensorId(1)), 0.7);
        a.gamma_op.insert((OperatorId(3), SensorId(1)), 0.0);
        let d = derive_sensor_gamma(&a, &w).unwrap();
        assert_eq!(d.gamma_sensor[&SensorId(1)], 0.7);
        assert_eq!(derive_sensor_gamma(&d, &w).unwrap(), d);

        a.gamma_op.insert((OperatorId(1), SensorId(1)), 0.0);
        a.gamma_op.insert((OperatorId(2), SensorId(1)), 0.0);
        a.gamma_op.insert((OperatorId(3), SensorId(1)), 0.25);
        let d = derive_sensor_gamma(&a, &w).unwrap();
        assert_eq!(d.gamma_sensor[&SensorId(1)], 0.25);
    }

    #[test]
    fn single_operator_sensor_gamma() {
        let (w, _) = single(800, 64, 8, 0, 0, 0);
        let a = at(&w, 1.0);
        assert_eq!(a.gamma_sensor[&SensorId(1)], 1.0);
    }

    #[test]
    fn data_volume_piecewise() {
        let (w, p) = single(800, 64, 8, 0, 0, 0);
        let v = |g| data_volume(&w, &p, &at(&w, g), OperatorId(1), NodeId(1)).unwrap();
        assert_eq!(v(0.5), 464.0);
        assert_eq!(v(1.0), 800.0);
        assert_eq!(v(0.0), 8.0);
    }

    #[test]
    fn data_volume_rejects_unequal_gamma() {
        let (mut w, mut p) = single(800, 64, 8, 0, 0, 0);
        w.operators[0].sensors.push(SensorId(2));
        w.topology.sensor_node.insert(SensorId(2), NodeId(1));
        w.sensors.insert(SensorId(2));
        p.data_raw.insert((OperatorId(1), SensorId(2), NodeId(1)), 800);
        let mut a = Assignment::default();
        a.gamma_op.insert((OperatorId(1), SensorId(1)), 0.2);
        a.gamma_op.insert((OperatorId(1), SensorId(2)), 0.4);
        let a = derive_sensor_gamma(&a, &w).unwrap();
        assert_eq!(
            data_volume(&w, &p, &a, OperatorId(1), NodeId(1)),
            Err(CostError::UnequalSensorGamma(OperatorId(1)))
        );
    }

    #[test]
    fn edge_time_retained_fraction() {
        let (w, p) = single(0, 0, 0, 3_000_000_000, 0, 0);
        let t = |g| edge_time(&w, &p, &at(&w, g), OperatorId(1), CostOrientation::Corrected).unwrap();
        assert!((t(0.5) - 1.0).abs() < 1e-12);
        assert_eq!(t(1.0), 0.0);
        let literal = edge_time(&w, &p, &at(&w, 0.0), OperatorId(1), CostOrientation::Literal).unwrap();
        assert_eq!(literal, 0.0);
    }

    #[test]
    fn edge_time_max_over_nodes() {
        let (mut w, mut p) = single(0, 0, 0, 600_000_000, 0, 0);
        w.operators[0].sensors.push(SensorId(2));
        w.topology.sensor_node.insert(SensorId(2), NodeId(2));
        w.topology.nodes.insert(NodeId(2));
        w.sensors.insert(SensorId(2));
        p.cpu_edge.insert((OperatorId(1), SensorId(2), NodeId(2)), 1_350_000_000);
        p.cpu_unit_edge.insert(NodeId(2), 1.5e9);
        p.bandwidth.insert(NodeId(2), 1e6);
        // Per-node times 0.4 s and 0.9 s.
        let t = edge_time(&w, &p, &at(&w, 0.0), OperatorId(1), CostOrientation::Corrected).unwrap();
        assert!((t - 0.9).abs() < 1e-12);
    }

    #[test]
    fn trans_time_uses_bandwidth() {
        let (w, p) = single(1_560_000, 0, 0, 0, 0, 0);
        assert!((trans_time(&w, &p, &at(&w, 1.0), OperatorId(1)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(trans_time(&w, &p, &at(&w, 0.0), OperatorId(1)).unwrap(), 0.0);
    }

    #[test]
    fn cloud_time_offloaded_fraction() {
        let (w, p) = single(0, 0, 0, 0, 3_000_000_000, 300_000_000);
        let t = |g| cloud_time(&w, &p, &at(&w, g), OperatorId(1), CostOrientation::Corrected).unwrap();
        assert!((t(0.5) - 0.6).abs() < 1e-12);
        assert_eq!(t(0.0), 0.0);
        let (w, p) = single(0, 0, 0, 0, 3_000_000_000, 0);
        let t1 = cloud_time(&w, &p, &at(&w, 1.0), OperatorId(1), CostOrientation::Corrected).unwrap();
        assert_eq!(t1, 1.0);
        // Printed form charges the cloud in full at γ = 0.
        let (w, p) = single(0, 0, 0, 0, 3_000_000_000, 300_000_000);
        let lit = cloud_time(&w, &p, &at(&w, 0.0), OperatorId(1), CostOrientation::Literal).unwrap();
        assert!((lit - 1.1).abs() < 1e-12);
    }

    fn with_deps(deps: &[u32]) -> Workload {
        let mut ops = Vec::new();
        for &d in deps {
            ops.push(OperatorSpec {
                id: OperatorId(d),
                sensors: vec![SensorId(1)],
                deps: vec![],
                func: FunctionKind::Mean,
                iterative: true,
                window_s: 1.0,
                step_s: 1.0,
                freq_s: 1.0,
                t_req_s: 1.0,
            });
        }
        ops.push(OperatorSpec {
            id: OperatorId(100),
            sensors: vec![SensorId(1)],
            deps: deps.iter().map(|&d| OperatorId(d)).collect(),
            func: FunctionKind::Trend,
            iterative: true,
            window_s: 1.0,
            step_s: 1.0,
            freq_s: 1.0,
            t_req_s: 1.0,
        });
        Workload::new(ops, Topology::from_wiring([(SensorId(1), NodeId(1))]))
    }

    #[test]
    fn wait_time_spread() {
        let w = with_deps(&[1, 2, 3]);
        let memo: BTreeMap<_, _> = [(OperatorId(1), 1.2), (OperatorId(2), 0.5), (OperatorId(3), 0.9)]
            .into_iter()
            .collect();
        assert!((wait_time(&w, OperatorId(100), &memo).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(wait_time(&w, OperatorId(1), &memo).unwrap(), 0.0);

        let w = with_deps(&[1]);
        let memo: BTreeMap<_, _> = [(OperatorId(1), 0.8)].into_iter().collect();
        assert_eq!(wait_time(&w, OperatorId(100), &memo).unwrap(), 0.0);
        assert!(matches!(
            wait_time(&w, OperatorId(100), &BTreeMap::new()),
            Err(CostError::MissingDependencyLatency { .. })
        ));
    }

    #[test]
    fn total_latency_sums_parts() {
        // edge 0.5, trans 0.2, cloud 0.1 (γ = 0.5, C_res = 0).
        let (w, p) = single(312_000 * 2 - 2 * 0, 0, 0, 1_500_000_000, 600_000_000, 0);
        let a = at(&w, 0.5);
        let mut memo = BTreeMap::new();
        let t = total_latency(&w, &p, &a, OperatorId(1), CostOrientation::Corrected, &mut memo).unwrap();
        // raw 624_000 * 0.5 / 1.56e6 = 0.2
        assert!((t - 0.8).abs() < 1e-12, "{t}");
        assert_eq!(memo[&OperatorId(1)], t);
    }

    #[test]
    fn composite_total_includes_wait() {
        // Dependencies finish at 1.0 s and 0.6 s; own parts: edge 0,
        // trans 0.1, cloud 0.2 → 0.4 + 0.3.
        let mut w = with_deps(&[1, 2]);
        w.operators[2].sensors = vec![SensorId(2)];
        w.topology.sensor_node.insert(SensorId(2), NodeId(1));
        w.sensors.insert(SensorId(2));
        let (_, mut p) = single(0, 0, 0, 0, 0, 0);
        let key = (OperatorId(100), SensorId(2), NodeId(1));
        p.data_raw.insert(key, 156_000);
        p.cpu_edge.insert(key, 0);
        p.cpu_cloud.insert((OperatorId(100), SensorId(2)), 600_000_000);
        let mut a = Assignment::default();
        a.gamma_op.insert((OperatorId(1), SensorId(1)), 1.0);
        a.gamma_op.insert((OperatorId(2), SensorId(1)), 1.0);
        a.gamma_op.insert((OperatorId(100), SensorId(2)), 1.0);
        let a = derive_sensor_gamma(&a, &w).unwrap();
        let mut memo: BTreeMap<_, _> = [(OperatorId(1), 1.0), (OperatorId(2), 0.6)].into_iter().collect();
        let t = total_latency(&w, &p, &a, OperatorId(100), CostOrientation::Corrected, &mut memo).unwrap();
        assert!((t - 0.7).abs() < 1e-12, "{t}");
    }

    #[test]
    fn node_usage_retained_fraction() {
        let (w, p) = single(0, 0, 0, 1_000_000_000, 0, 0);
        let c = |g| node_cpu(&w, &p, &at(&w, g), OperatorId(1), NodeId(1), CostOrientation::Corrected).unwrap();
        assert_eq!(c(0.25), 7.5e8);
        assert_eq!(c(1.0), 0.0);

        let (mut w, mut p) = single(0, 0, 0, 0, 0, 0);
        w.operators[0].sensors.push(SensorId(2));
        w.topology.sensor_node.insert(SensorId(2), NodeId(1));
        w.sensors.insert(SensorId(2));
        p.mem_edge.insert((OperatorId(1), SensorId(2), NodeId(1)), 4096);
        let m = node_mem(&w, &p, &at(&w, 0.0), OperatorId(1), NodeId(1), CostOrientation::Corrected).unwrap();
        assert_eq!(m, 8192.0);
    }

    #[test]
    fn objective_modes_on_shared_sensor() {
        let (mut w, mut p) = single(800, 64, 8, 0, 0, 0);
        let mut o2 = w.operators[0].clone();
        o2.id = OperatorId(2);
        w.operators.push(o2);
        p.data_raw.insert((OperatorId(2), SensorId(1), NodeId(1)), 800);
        let a = at(&w, 1.0);
        assert_eq!(total_objective(&w, &p, &a, ObjectiveMode::Paper).unwrap(), 1600.0);
        assert_eq!(total_objective(&w, &p, &a, ObjectiveMode::Dedup).unwrap(), 800.0);
    }

    #[test]
    fn objective_modes_agree_on_single_operator() {
        let (w, p) = single(800, 64, 8, 0, 0, 0);
        for g in [0.0, 0.3, 1.0] {
            let a = at(&w, g);
            assert_eq!(
                total_objective(&w, &p, &a, ObjectiveMode::Paper).unwrap(),
                total_objective(&w, &p, &a, ObjectiveMode::Dedup).unwrap()
            );
        }
        let empty = Workload::default();
        let a = Assignment::default();
        assert_eq!(total_objective(&empty, &Profile { cpu_unit_cloud: 1.0, ..Default::default() }, &a, ObjectiveMode::Paper).unwrap(), 0.0);
    }

    #[test]
    fn assignment_json_round_trip() {
        let (w, _) = single(800, 64, 8, 0, 0, 0);
        let a = at(&w, 0.35);
        let s = serde_json::to_string(&a).unwrap();
        let back: Assignment = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn union_of_overlapping_spans() {
        let mut spans = vec![(0, 10), (5, 15), (20, 30), (30, 31)];
        assert_eq!(union_length(&mut spans), 26);
    }
}
