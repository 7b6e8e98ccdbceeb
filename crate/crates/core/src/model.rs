//! Domain types for operators, sensors, edge nodes and their wiring, plus
//! structural validation, dependency ordering and cluster decomposition.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! id_type {
    ($name:ident, $prefix:literal) => {
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(SensorId, "s");
id_type!(NodeId, "n");
id_type!(OperatorId, "o");

/// The windowed functions an operator can apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Mean,
    Msqrt,
    Max,
    Min,
    First,
    Last,
    Range,
    Std,
    Var,
    Cov,
    Speed,
    Acc,
    Disp,
    Cc,
    Filter,
    Trend,
    Surge,
    Avgws,
    Avgwa,
    Gf,
    Fws,
    Ti,
    Aoa,
    Awd,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 24] = [
        FunctionKind::Mean,
        FunctionKind::Msqrt,
        FunctionKind::Max,
        FunctionKind::Min,
        FunctionKind::First,
        FunctionKind::Last,
        FunctionKind::Range,
        FunctionKind::Std,
        FunctionKind::Var,
        FunctionKind::Cov,
        FunctionKind::Speed,
        FunctionKind::Acc,
        FunctionKind::Disp,
        FunctionKind::Cc,
        FunctionKind::Filter,
        FunctionKind::Trend,
        FunctionKind::Surge,
        FunctionKind::Avgws,
        FunctionKind::Avgwa,
        FunctionKind::Gf,
        FunctionKind::Fws,
        FunctionKind::Ti,
        FunctionKind::Aoa,
        FunctionKind::Awd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Mean => "mean",
            FunctionKind::Msqrt => "msqrt",
            FunctionKind::Max => "max",
            FunctionKind::Min => "min",
            FunctionKind::First => "first",
            FunctionKind::Last => "last",
            FunctionKind::Range => "range",
            FunctionKind::Std => "std",
            FunctionKind::Var => "var",
            FunctionKind::Cov => "cov",
            FunctionKind::Speed => "speed",
            FunctionKind::Acc => "acc",
            FunctionKind::Disp => "disp",
            FunctionKind::Cc => "cc",
            FunctionKind::Filter => "filter",
            FunctionKind::Trend => "trend",
            FunctionKind::Surge => "surge",
            FunctionKind::Avgws => "avgws",
            FunctionKind::Avgwa => "avgwa",
            FunctionKind::Gf => "gf",
            FunctionKind::Fws => "fws",
            FunctionKind::Ti => "ti",
            FunctionKind::Aoa => "aoa",
            FunctionKind::Awd => "awd",
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown function name `{0}`")]
pub struct UnknownFunction(pub String);

impl FromStr for FunctionKind {
    type Err = UnknownFunction;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionKind::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFunction(s.to_string()))
    }
}

/// One stream operator: its inputs, function and timing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub id: OperatorId,
    pub sensors: Vec<SensorId>,
    pub deps: Vec<OperatorId>,
    pub func: FunctionKind,
    pub iterative: bool,
    pub window_s: f64,
    pub step_s: f64,
    pub freq_s: f64,
    /// Latency requirement. `f64::INFINITY` means unconstrained.
    pub t_req_s: f64,
}

impl OperatorSpec {
    pub fn is_atomic(&self) -> bool {
        self.deps.is_empty()
    }

    pub fn is_composite(&self) -> bool {
        !self.deps.is_empty()
    }
}

/// Sensor to edge-node wiring.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub sensor_node: BTreeMap<SensorId, NodeId>,
    pub nodes: BTreeSet<NodeId>,
}

impl Topology {
    /// Builds a topology whose node set is exactly the wired nodes.
    pub fn from_wiring(wiring: impl IntoIterator<Item = (SensorId, NodeId)>) -> Self {
        let sensor_node: BTreeMap<_, _> = wiring.into_iter().collect();
        let nodes = sensor_node.values().copied().collect();
        Topology { sensor_node, nodes }
    }

    pub fn node_of(&self, sensor: SensorId) -> Option<NodeId> {
        self.sensor_node.get(&sensor).copied()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Workload {
    pub operators: Vec<OperatorSpec>,
    pub sensors: BTreeSet<SensorId>,
    pub topology: Topology,
    /// Optional human-readable sensor labels.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sensor_labels: BTreeMap<SensorId, String>,
}

impl Workload {
    pub fn new(operators: Vec<OperatorSpec>, topology: Topology) -> Self {
        let mut sensors: BTreeSet<SensorId> = topology.sensor_node.keys().copied().collect();
        for op in &operators {
            sensors.extend(op.sensors.iter().copied());
        }
        Workload {
            operators,
            sensors,
            topology,
            sensor_labels: BTreeMap::new(),
        }
    }

    pub fn operator(&self, id: OperatorId) -> Option<&OperatorSpec> {
        self.operators.iter().find(|o| o.id == id)
    }

    /// Index from operator id to its position in `operators`.
    pub fn index(&self) -> BTreeMap<OperatorId, usize> {
        self.operators
            .iter()
            .enumerate()
            .map(|(i, o)| (o.id, i))
            .collect()
    }

    /// Nodes hosting the operator's own sensors.
    pub fn sensor_nodes(&self, op: &OperatorSpec) -> BTreeSet<NodeId> {
        op.sensors
            .iter()
            .filter_map(|s| self.topology.node_of(*s))
            .collect()
    }

    /// Sensors read by all transitive dependencies of `op` (not `op` itself).
    pub fn transitive_dep_sensors(&self, op: &OperatorSpec) -> BTreeSet<SensorId> {
        let index = self.index();
        let mut seen = BTreeSet::new();
        let mut stack: Vec<OperatorId> = op.deps.clone();
        let mut sensors = BTreeSet::new();
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            if let Some(&pos) = index.get(&id) {
                let dep = &self.operators[pos];
                sensors.extend(dep.sensors.iter().copied());
                stack.extend(dep.deps.iter().copied());
            }
        }
        sensors
    }

    /// Node where the operator's partial and final results originate: the
    /// smallest node of its own sensors, else of its transitive dependencies.
    pub fn home_node(&self, op: &OperatorSpec) -> Option<NodeId> {
        self.sensor_nodes(op).into_iter().next().or_else(|| {
            self.transitive_dep_sensors(op)
                .into_iter()
                .filter_map(|s| self.topology.node_of(s))
                .min()
        })
    }

    /// Nodes whose links carry traffic for `op`.
    pub fn operator_nodes(&self, op: &OperatorSpec) -> BTreeSet<NodeId> {
        let mut nodes = self.sensor_nodes(op);
        if nodes.is_empty() {
            nodes.extend(self.home_node(op));
        }
        nodes
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "category", rename_all = "kebab-case")]
pub enum StructuralViolation {
    /// Operators forming one dependency cycle, ascending.
    Cycle { operators: Vec<OperatorId> },
    DanglingRef { operator: Option<OperatorId>, detail: String },
    UnwiredSensor { sensor: SensorId },
    NonpositiveDuration { operator: OperatorId, field: String, value: f64 },
}

impl fmt::Display for StructuralViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuralViolation::Cycle { operators } => {
                let ids: Vec<String> = operators.iter().map(|o| o.to_string()).collect();
                write!(f, "cycle({})", ids.join(","))
            }
            StructuralViolation::DanglingRef { operator, detail } => match operator {
                Some(op) => write!(f, "dangling-ref({op}): {detail}"),
                None => write!(f, "dangling-ref: {detail}"),
            },
            StructuralViolation::UnwiredSensor { sensor } => write!(f, "unwired-sensor({sensor})"),
            StructuralViolation::NonpositiveDuration {
                operator,
                field,
                value,
            } => write!(f, "nonpositive-duration({operator}.{field} = {value})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<StructuralViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_workload(w: &Workload) -> ValidationReport {
    let mut violations = Vec::new();
    let mut ids = BTreeSet::new();
    for op in &w.operators {
        if !ids.insert(op.id) {
            violations.push(StructuralViolation::DanglingRef {
                operator: Some(op.id),
                detail: "operator id declared twice".to_string(),
            });
        }
    }

    for op in &w.operators {
        for dep in &op.deps {
            if !ids.contains(dep) {
                violations.push(StructuralViolation::DanglingRef {
                    operator: Some(op.id),
                    detail: format!("dependency {dep} is not declared"),
                });
            }
        }
        for s in &op.sensors {
            if !w.sensors.contains(s) {
                violations.push(StructuralViolation::DanglingRef {
                    operator: Some(op.id),
                    detail: format!("sensor {s} is not declared"),
                });
            }
        }
        if op.is_atomic() && op.sensors.is_empty() {
            violations.push(StructuralViolation::DanglingRef {
                operator: Some(op.id),
                detail: "atomic operator reads no sensors".to_string(),
            });
        }
        for (field, value) in [
            ("window_s", op.window_s),
            ("step_s", op.step_s),
            ("freq_s", op.freq_s),
            ("t_req_s", op.t_req_s),
        ] {
            // NaN fails this comparison too.
            if !(value > 0.0) {
                violations.push(StructuralViolation::NonpositiveDuration {
                    operator: op.id,
                    field: field.to_string(),
                    value,
                });
            }
        }
    }

    for s in &w.sensors {
        match w.topology.sensor_node.get(s) {
            None => violations.push(StructuralViolation::UnwiredSensor { sensor: *s }),
            Some(n) if !w.topology.nodes.contains(n) => {
                violations.push(StructuralViolation::DanglingRef {
                    operator: None,
                    detail: format!("sensor {s} is wired to undeclared node {n}"),
                })
            }
            Some(_) => {}
        }
    }

    for cycle in find_cycles(w) {
        violations.push(StructuralViolation::Cycle { operators: cycle });
    }

    ValidationReport { violations }
}

/// Strongly connected components of size > 1 (or self-loops), each sorted.
fn find_cycles(w: &Workload) -> Vec<Vec<OperatorId>> {
    let index = w.index();
    let n = w.operators.len();
    let adj: Vec<Vec<usize>> = w
        .operators
        .iter()
        .map(|o| o.deps.iter().filter_map(|d| index.get(d).copied()).collect())
        .collect();

    // Iterative Tarjan.
    let mut idx = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut out = Vec::new();

    for root in 0..n {
        if idx[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        idx[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < adj[v].len() {
                let u = adj[v][*edge];
                *edge += 1;
                if idx[u] == usize::MAX {
                    idx[u] = counter;
                    low[u] = counter;
                    counter += 1;
                    stack.push(u);
                    on_stack[u] = true;
                    call.push((u, 0));
                } else if on_stack[u] {
                    low[v] = low[v].min(idx[u]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == idx[v] {
                    let mut comp = Vec::new();
                    loop {
                        let x = stack.pop().expect("tarjan stack");
                        on_stack[x] = false;
                        comp.push(w.operators[x].id);
                        if x == v {
                            break;
                        }
                    }
                    let self_loop = comp.len() == 1 && adj[v].contains(&v);
                    if comp.len() > 1 || self_loop {
                        comp.sort();
                        out.push(comp);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dependency graph has a cycle through {0:?}")]
pub struct CyclicWorkload(pub Vec<OperatorId>);

/// Atomic operators first (ascending id), then composites in dependency
/// order with ascending-id tie-breaking.
pub fn topological_order(w: &Workload) -> Result<Vec<OperatorId>, CyclicWorkload> {
    let index = w.index();
    let mut order: Vec<OperatorId> = w
        .operators
        .iter()
        .filter(|o| o.is_atomic())
        .map(|o| o.id)
        .collect();
    order.sort();

    let composites: Vec<&OperatorSpec> = w.operators.iter().filter(|o| o.is_composite()).collect();
    let mut pending: BTreeMap<OperatorId, usize> = BTreeMap::new();
    let mut dependents: BTreeMap<OperatorId, Vec<OperatorId>> = BTreeMap::new();
    for op in &composites {
        let unique: BTreeSet<OperatorId> = op.deps.iter().copied().collect();
        let mut count = 0;
        for d in unique {
            let dep_is_composite = index
                .get(&d)
                .map(|&p| w.operators[p].is_composite())
                .unwrap_or(false);
            if dep_is_composite {
                count += 1;
                dependents.entry(d).or_default().push(op.id);
            }
        }
        pending.insert(op.id, count);
    }

    let mut ready: BinaryHeap<Reverse<OperatorId>> = pending
        .iter()
        .filter(|(_, &c)| c == 0)
        .map(|(&id, _)| Reverse(id))
        .collect();
    while let Some(Reverse(id)) = ready.pop() {
        order.push(id);
        if let Some(ds) = dependents.get(&id) {
            for d in ds {
                let c = pending.get_mut(d).expect("pending composite");
                *c -= 1;
                if *c == 0 {
                    ready.push(Reverse(*d));
                }
            }
        }
    }

    if order.len() != w.operators.len() {
        let placed: BTreeSet<OperatorId> = order.iter().copied().collect();
        let stuck = w
            .operators
            .iter()
            .map(|o| o.id)
            .filter(|id| !placed.contains(id))
            .collect();
        return Err(CyclicWorkload(stuck));
    }
    Ok(order)
}

/// Partition of operators into groups connected by shared sensors or
/// dependency edges. Each cluster is sorted; clusters are ordered by their
/// smallest member.
pub fn sensor_clusters(w: &Workload) -> Vec<Vec<OperatorId>> {
    let n = w.operators.len();
    let index = w.index();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    fn union(parent: &mut [usize], a: usize, b: usize) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    }

    let mut first_reader: BTreeMap<SensorId, usize> = BTreeMap::new();
    for (i, op) in w.operators.iter().enumerate() {
        for s in &op.sensors {
            match first_reader.get(s) {
                Some(&j) => union(&mut parent, i, j),
                None => {
                    first_reader.insert(*s, i);
                }
            }
        }
        for d in &op.deps {
            if let Some(&j) = index.get(d) {
                union(&mut parent, i, j);
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<OperatorId>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(w.operators[i].id);
    }
    let mut clusters: Vec<Vec<OperatorId>> = groups
        .into_values()
        .map(|mut g| {
            g.sort();
            g
        })
        .collect();
    clusters.sort_by_key(|c| c[0]);
    clusters
}

/// Window/step/emission schedule in sample units at a given rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub window: u64,
    pub step: u64,
    pub freq: u64,
}

impl Schedule {
    pub fn new(op: &OperatorSpec, rate_hz: f64) -> Self {
        let to_samples = |secs: f64| ((secs * rate_hz).round() as u64).max(1);
        Schedule {
            window: to_samples(op.window_s),
            step: to_samples(op.step_s),
            freq: to_samples(op.freq_s),
        }
    }

    /// Sample index (exclusive end) at which window `w` closes.
    pub fn close(&self, w: u64) -> u64 {
        self.window + w * self.step
    }

    pub fn start(&self, w: u64) -> u64 {
        self.close(w) - self.window
    }

    /// Number of windows closing at or before `horizon` samples.
    pub fn windows_within(&self, horizon: u64) -> u64 {
        if horizon < self.window {
            0
        } else {
            (horizon - self.window) / self.step + 1
        }
    }

    /// Latest window closed at or before sample index `t`.
    pub fn latest_closed(&self, t: u64) -> Option<u64> {
        if t < self.window {
            None
        } else {
            Some((t - self.window) / self.step)
        }
    }

    /// Emission ticks `m * freq <= horizon` that have a closed window.
    pub fn emissions_within(&self, horizon: u64) -> u64 {
        let total = horizon / self.freq;
        let before_first = (self.window.saturating_sub(1)) / self.freq;
        total.saturating_sub(before_first)
    }
}
