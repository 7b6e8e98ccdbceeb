//! Constraint checking (C1..C12) and composite ratio propagation.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::costs::{Assignment, CostError, CostModel, CostOrientation, Gammas, Profile, GAMMA_TOL};
use crate::model::{NodeId, OperatorId, SensorId, Workload};

/// Relative tolerance on latency and capacity bounds.
pub const BOUND_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConstraintId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: ConstraintId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<OperatorId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensor: Option<SensorId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<NodeId>,
    pub measured: f64,
    pub bound: f64,
    pub detail: String,
}

impl Violation {
    fn new(constraint: ConstraintId, measured: f64, bound: f64, detail: String) -> Self {
        Violation {
            constraint,
            op: None,
            sensor: None,
            node: None,
            measured,
            bound,
            detail,
        }
    }

    fn op(mut self, op: OperatorId) -> Self {
        self.op = Some(op);
        self
    }

    fn sensor(mut self, s: SensorId) -> Self {
        self.sensor = Some(s);
        self
    }

    fn node(mut self, k: NodeId) -> Self {
        self.node = Some(k);
        self
    }
}

/// Whether no single edge node holds all inputs of `i`: its own sensors
/// span several nodes, or (for composites) its own plus its transitive
/// dependencies' sensors do.
pub fn forced_cloud(w: &Workload, i: OperatorId) -> bool {
    let Some(op) = w.operator(i) else { return false };
    forced_reason(w, op).is_some()
}

fn forced_reason(w: &Workload, op: &crate::model::OperatorSpec) -> Option<ConstraintId> {
    if w.sensor_nodes(op).len() > 1 {
        return Some(ConstraintId::C6);
    }
    if op.is_composite() {
        let mut nodes: BTreeSet<NodeId> = w.sensor_nodes(op);
        nodes.extend(
            w.transitive_dep_sensors(op)
                .into_iter()
                .filter_map(|s| w.topology.node_of(s)),
        );
        if nodes.len() > 1 {
            return Some(ConstraintId::C7);
        }
    }
    None
}

/// Precomputed structure shared by checks and the solver.
#[derive(Debug, Clone)]
pub struct Structure {
    /// Topological order as dense operator indices.
    pub order: Vec<usize>,
    pub forced: Vec<Option<ConstraintId>>,
    pub composite: Vec<bool>,
    pub iterative: Vec<bool>,
    /// Operators whose sensors are not all wired to declared nodes.
    pub(crate) wiring: Vec<Violation>,
}

impl Structure {
    pub fn new(w: &Workload) -> Self {
        let mut wiring = Vec::new();
        for op in &w.operators {
            for s in &op.sensors {
                match w.topology.node_of(*s) {
                    None => wiring.push(
                        Violation::new(ConstraintId::C5, 0.0, 1.0, format!("sensor {s} of {} is not wired", op.id))
                            .op(op.id)
                            .sensor(*s),
                    ),
                    Some(k) if !w.topology.nodes.contains(&k) => wiring.push(
                        Violation::new(
                            ConstraintId::C4,
                            0.0,
                            1.0,
                            format!("sensor {s} of {} wired to undeclared node {k}", op.id),
                        )
                        .op(op.id)
                        .sensor(*s)
                        .node(k),
                    ),
                    Some(_) => {}
                }
            }
        }
        Structure {
            order: crate::costs::dense_order(w),
            forced: w.operators.iter().map(|o| forced_reason(w, o)).collect(),
            composite: w.operators.iter().map(|o| o.is_composite()).collect(),
            iterative: w.operators.iter().map(|o| o.iterative).collect(),
            wiring,
        }
    }

    /// Ratio a composite must take given its dependencies.
    pub fn composite_gamma(&self, m: &CostModel, g: &Gammas, i: usize) -> f64 {
        if self.forced[i].is_some() {
            return 1.0;
        }
        let deps = &m.ops[i].deps;
        let values = deps.iter().map(|&d| effective_gamma(g, d));
        let mut min = f64::INFINITY;
        let mut fractional = false;
        for v in values {
            fractional |= v > GAMMA_TOL && v < 1.0 - GAMMA_TOL;
            min = min.min(v);
        }
        if fractional {
            1.0
        } else if min.is_finite() {
            min
        } else {
            1.0
        }
    }

    /// Sets every composite in dependency order.
    pub fn propagate(&self, m: &CostModel, g: &mut Gammas) {
        for &i in &self.order {
            if self.composite[i] {
                let v = self.composite_gamma(m, g, i);
                g.set(m, i, v);
            }
        }
    }

    /// All violations of `g`, restricted to operators in `scope` and the
    /// nodes they touch. Stops early once `limit` violations are found.
    pub fn check(
        &self,
        m: &CostModel,
        g: &Gammas,
        scope: Option<&[bool]>,
        limit: usize,
    ) -> Vec<Violation> {
        let mut out = Vec::new();
        let in_scope = |i: usize| scope.map_or(true, |s| s[i]);
        macro_rules! push {
            ($v:expr) => {{
                out.push($v);
                if out.len() >= limit {
                    return out;
                }
            }};
        }
        for v in &self.wiring {
            let pos = v.op.and_then(|id| m.ops.iter().position(|o| o.id == id));
            if pos.map_or(true, in_scope) {
                push!(v.clone());
            }
        }

        let mut unequal = vec![false; m.ops.len()];
        for i in 0..m.ops.len() {
            if !in_scope(i) || !g.determined[i] {
                continue;
            }
            let id = m.ops[i].id;
            let values: Vec<(Option<SensorId>, f64)> = if m.ops[i].entries.is_empty() {
                vec![(None, g.op[i])]
            } else {
                m.ops[i]
                    .entries
                    .iter()
                    .zip(&g.entry[i])
                    .map(|(e, &v)| (Some(m.sensors[e.sensor]), v))
                    .collect()
            };
            for &(s, v) in &values {
                let bad = if self.iterative[i] {
                    !(v >= -GAMMA_TOL && v <= 1.0 + GAMMA_TOL)
                } else {
                    !(v.abs() <= GAMMA_TOL || (v - 1.0).abs() <= GAMMA_TOL)
                };
                if bad {
                    let (c, bound) = if self.iterative[i] {
                        (ConstraintId::C1, if v < 0.0 { 0.0 } else { 1.0 })
                    } else {
                        (ConstraintId::C2, v.round().clamp(0.0, 1.0))
                    };
                    let mut viol = Violation::new(c, v, bound, format!("gamma {v} of {id} outside its domain")).op(id);
                    if let Some(s) = s {
                        viol = viol.sensor(s);
                    }
                    push!(viol);
                }
            }
            let lo = values.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
            let hi = values.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
            if hi - lo > GAMMA_TOL || lo.is_nan() {
                unequal[i] = true;
                push!(Violation::new(
                    ConstraintId::C3,
                    hi - lo,
                    0.0,
                    format!("sensors of {id} carry ratios between {lo} and {hi}")
                )
                .op(id));
            }
        }

        // Placement constraints, first applicable rule only.
        for i in 0..m.ops.len() {
            if !in_scope(i) || !g.determined[i] {
                continue;
            }
            let id = m.ops[i].id;
            let gi = effective_gamma(g, i);
            if let Some(c) = self.forced[i] {
                if (gi - 1.0).abs() > GAMMA_TOL {
                    push!(Violation::new(c, gi, 1.0, format!("{id} spans several nodes and must be offloaded")).op(id));
                }
                continue;
            }
            if !self.composite[i] {
                continue;
            }
            let deps = &m.ops[i].deps;
            if deps.iter().any(|&d| !g.determined[d]) {
                continue;
            }
            let fractional = deps.iter().any(|&d| {
                let v = effective_gamma(g, d);
                v > GAMMA_TOL && v < 1.0 - GAMMA_TOL
            });
            if fractional {
                if (gi - 1.0).abs() > GAMMA_TOL {
                    push!(Violation::new(
                        ConstraintId::C8,
                        gi,
                        1.0,
                        format!("{id} depends on a partially offloaded operator")
                    )
                    .op(id));
                }
                continue;
            }
            let min = deps.iter().map(|&d| effective_gamma(g, d)).fold(f64::INFINITY, f64::min);
            if (gi - min).abs() > GAMMA_TOL {
                push!(Violation::new(
                    ConstraintId::C9,
                    gi,
                    min,
                    format!("{id} must take the smallest ratio of its dependencies")
                )
                .op(id));
            }
        }

        // Latency, in dependency order; operators with unusable ratios and
        // everything downstream of them are skipped.
        let mut memo: Vec<Option<f64>> = vec![None; m.ops.len()];
        for &i in &self.order {
            if !g.determined[i] || unequal[i] {
                continue;
            }
            let Ok(parts) = m.latency_parts(i, g, &memo) else { continue };
            let t = parts.total();
            memo[i] = Some(t);
            let req = m.ops[i].t_req;
            if in_scope(i) && t > req * (1.0 + BOUND_RTOL) {
                let id = m.ops[i].id;
                push!(Violation::new(ConstraintId::C10, t, req, format!("{id} takes {t:.6} s against {req:.6} s")).op(id));
            }
        }

        for k in 0..m.nodes.len() {
            let touched = (0..m.ops.len())
                .any(|i| in_scope(i) && m.ops[i].entries.iter().any(|e| e.node == k));
            if !touched {
                continue;
            }
            let mut cpu = 0.0;
            let mut mem = 0.0;
            for i in 0..m.ops.len() {
                if g.determined[i] && (scope.is_none() || in_scope(i)) {
                    cpu += m.node_cpu(i, k, g);
                    mem += m.node_mem(i, k, g);
                }
            }
            let node = &m.nodes[k];
            if cpu >= node.cpu_cap * (1.0 - BOUND_RTOL) {
                push!(Violation::new(
                    ConstraintId::C11,
                    cpu,
                    node.cpu_cap,
                    format!("node {} needs {cpu} cycles of {}", node.id, node.cpu_cap)
                )
                .node(node.id));
            }
            if mem >= node.mem_cap * (1.0 - BOUND_RTOL) {
                push!(Violation::new(
                    ConstraintId::C12,
                    mem,
                    node.mem_cap,
                    format!("node {} needs {mem} bytes of {}", node.id, node.mem_cap)
                )
                .node(node.id));
            }
        }
        out
    }
}

/// Operator ratio for placement rules; the largest entry if they disagree.
fn effective_gamma(g: &Gammas, i: usize) -> f64 {
    match g.op_value(i) {
        Some(v) => v,
        None => g.entry[i].iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Recomputes every composite's ratio from its dependencies.
pub fn propagate_composite_gamma(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
) -> Result<Assignment, CostError> {
    let m = CostModel::new(w, p, CostOrientation::Corrected)?;
    let st = Structure::new(w);
    let mut g = Gammas::empty(&m);
    for (i, op) in w.operators.iter().enumerate() {
        if op.is_composite() {
            continue;
        }
        let v = a.operator_gamma(op).or_else(|e| match e {
            CostError::UnequalSensorGamma(_) => Ok(op
                .sensors
                .iter()
                .filter_map(|s| a.gamma_op.get(&(op.id, *s)))
                .copied()
                .fold(f64::NEG_INFINITY, f64::max)),
            other => Err(other),
        })?;
        g.set(&m, i, v);
    }
    st.propagate(&m, &mut g);
    let mut out = m.assignment(w, &g);
    // Keep the caller's per-sensor atomic values untouched.
    for op in w.operators.iter().filter(|o| o.is_atomic()) {
        for s in &op.sensors {
            if let Some(v) = a.gamma_op.get(&(op.id, *s)) {
                out.gamma_op.insert((op.id, *s), *v);
            }
        }
    }
    crate::costs::derive_sensor_gamma(&out, w)
}

/// Every violated constraint of `a`; empty means feasible.
pub fn check_assignment(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    orientation: CostOrientation,
) -> Result<Vec<Violation>, CostError> {
    let m = CostModel::new(w, p, orientation)?;
    let g = m.gammas(w, a)?;
    Ok(Structure::new(w).check(&m, &g, None, usize::MAX))
}
