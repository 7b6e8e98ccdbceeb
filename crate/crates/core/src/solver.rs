//! Grid enumeration of offload ratios with pre-flight pruning, plus an
//! exhaustive oracle.
//!
//! Free variables are the ratios of atomic operators; composite ratios are
//! always derived from their dependencies. Operators are split into solve
//! units (sensor clusters joined when they share an edge node, so capacity
//! sums stay inside one unit) and units are searched independently.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::costs::{
    Assignment, CostError, CostModel, CostOrientation, CostReport, Gammas, ObjectiveMode, Profile,
};
use crate::feasibility::{Structure, Violation, BOUND_RTOL};
use crate::model::{sensor_clusters, OperatorId, Workload};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Preflights {
    pub resource: bool,
    pub bound: bool,
    pub latency: bool,
}

impl Default for Preflights {
    fn default() -> Self {
        Preflights {
            resource: true,
            bound: true,
            latency: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub delta: f64,
    pub objective_mode: ObjectiveMode,
    pub cost_orientation: CostOrientation,
    #[serde(default)]
    pub time_budget_s: Option<f64>,
    #[serde(default)]
    pub preflights: Preflights,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            delta: 0.05,
            objective_mode: ObjectiveMode::Paper,
            cost_orientation: CostOrientation::Corrected,
            time_budget_s: None,
            preflights: Preflights::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub units: usize,
    pub nodes_explored: u64,
    pub leaves: u64,
    pub prunes_resource: u64,
    pub prunes_bound: u64,
    pub prunes_latency: u64,
    pub leaves_infeasible: u64,
    pub budget_exceeded: bool,
}

impl SolverStats {
    fn absorb(&mut self, o: &SolverStats) {
        self.units += o.units;
        self.nodes_explored += o.nodes_explored;
        self.leaves += o.leaves;
        self.prunes_resource += o.prunes_resource;
        self.prunes_bound += o.prunes_bound;
        self.prunes_latency += o.prunes_latency;
        self.leaves_infeasible += o.leaves_infeasible;
        self.budget_exceeded |= o.budget_exceeded;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub assignment: Assignment,
    pub objective_bytes: f64,
    pub costs: CostReport,
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub stats: SolverStats,
    /// Composites combining edge-resident and cloud-resident dependencies.
    #[serde(default)]
    pub cross_placement: Vec<OperatorId>,
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error("grid step must lie in (0, 1], got {0}")]
    BadDelta(f64),
    #[error("workload has a dependency cycle")]
    Cyclic,
    #[error("enumeration needs {0} leaves, above the cap of {cap}", cap = BRUTE_FORCE_CAP)]
    TooLarge(f64),
}

pub const BRUTE_FORCE_CAP: f64 = 1e6;

/// `{0, Δ, 2Δ, …} ∪ {1}`; values computed as `k·Δ`.
pub fn grid(delta: f64) -> Result<Vec<f64>, SolveError> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(SolveError::BadDelta(delta));
    }
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let v = k as f64 * delta;
        if v >= 1.0 - 1e-12 {
            break;
        }
        out.push(v);
        k += 1;
    }
    out.push(1.0);
    Ok(out)
}

/// Shared inputs of one solve.
pub(crate) struct Problem<'a> {
    pub w: &'a Workload,
    pub m: CostModel,
    pub st: Structure,
    pub grid: Vec<f64>,
    pub mode: ObjectiveMode,
}

impl<'a> Problem<'a> {
    pub fn new(w: &'a Workload, p: &Profile, cfg: &SolverConfig) -> Result<Self, SolveError> {
        if crate::model::topological_order(w).is_err() {
            return Err(SolveError::Cyclic);
        }
        Ok(Problem {
            w,
            m: CostModel::new(w, p, cfg.cost_orientation)?,
            st: Structure::new(w),
            grid: grid(cfg.delta)?,
            mode: cfg.objective_mode,
        })
    }

    fn domain(&self, i: usize) -> Vec<f64> {
        if self.st.forced[i].is_some() {
            vec![1.0]
        } else if !self.st.iterative[i] {
            vec![0.0, 1.0]
        } else {
            self.grid.clone()
        }
    }

    fn sum_latency(&self, g: &Gammas, scope: &[bool]) -> f64 {
        let mut memo = vec![None; self.m.op_count()];
        let mut total = 0.0;
        for &i in &self.st.order {
            if let Ok(parts) = self.m.latency_parts(i, g, &memo) {
                memo[i] = Some(parts.total());
                if scope[i] {
                    total += parts.total();
                }
            }
        }
        total
    }

    /// Full solution record for a complete dense assignment.
    pub fn finish(&self, g: &Gammas, stats: SolverStats) -> Result<Solution, SolveError> {
        let violations = self.st.check(&self.m, g, None, usize::MAX);
        let costs = self.m.evaluate(g, &self.st.order, self.mode)?;
        Ok(Solution {
            assignment: self.m.assignment(self.w, g),
            objective_bytes: costs.objective_bytes,
            feasible: violations.is_empty(),
            violations,
            costs,
            stats,
            cross_placement: self.cross_placement(g),
        })
    }

    fn cross_placement(&self, g: &Gammas) -> Vec<OperatorId> {
        (0..self.m.op_count())
            .filter(|&i| self.st.composite[i])
            .filter(|&i| {
                let deps = &self.m.ops[i].deps;
                deps.iter().any(|&d| g.op[d] == 0.0) && deps.iter().any(|&d| g.op[d] == 1.0)
            })
            .map(|i| self.m.op_id(i))
            .collect()
    }
}

/// Pre-flight check 1: some touched node's partial CPU or memory sum
/// already reaches its capacity.
pub fn preflight_resource(m: &CostModel, g: &Gammas, scope: &[bool]) -> bool {
    for k in 0..m.node_count() {
        let mut cpu = 0.0;
        let mut mem = 0.0;
        for i in 0..m.op_count() {
            if scope[i] && g.determined[i] {
                cpu += m.node_cpu(i, k, g);
                mem += m.node_mem(i, k, g);
            }
        }
        let n = &m.nodes[k];
        if cpu >= n.cpu_cap * (1.0 - BOUND_RTOL) || mem >= n.mem_cap * (1.0 - BOUND_RTOL) {
            return false;
        }
    }
    true
}

/// Pre-flight check 2: the partial objective does not exceed the incumbent.
/// Ties survive so the final tie-break sees every optimum.
pub fn preflight_bound(
    m: &CostModel,
    g: &Gammas,
    mode: ObjectiveMode,
    scope: &[bool],
    incumbent: f64,
) -> bool {
    match m.objective_over(g, mode, Some(scope)) {
        Ok(v) => v <= incumbent,
        Err(_) => false,
    }
}

/// Pre-flight check 3: every determined atomic operator meets its latency
/// bound. Raw traffic only grows as more readers of a sensor are fixed, so
/// the partial latency is a lower bound.
pub fn preflight_latency(m: &CostModel, st: &Structure, g: &Gammas, scope: &[bool]) -> bool {
    let memo = vec![None; m.op_count()];
    for i in 0..m.op_count() {
        if !scope[i] || !g.determined[i] || st.composite[i] {
            continue;
        }
        match m.latency_parts(i, g, &memo) {
            Ok(parts) if parts.total() <= m.ops[i].t_req * (1.0 + BOUND_RTOL) => {}
            _ => return false,
        }
    }
    true
}

#[derive(Debug, Clone)]
struct Best {
    objective: f64,
    latency: f64,
    key: Vec<f64>,
    gammas: Vec<f64>,
}

impl Best {
    fn better_than(&self, other: &Best) -> bool {
        let c = self
            .objective
            .total_cmp(&other.objective)
            .then(self.latency.total_cmp(&other.latency))
            .then_with(|| lex(&self.key, &other.key));
        c == Ordering::Less
    }
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

struct UnitSearch<'p, 'a> {
    pb: &'p Problem<'a>,
    scope: Vec<bool>,
    /// Unit operators in dependency order.
    order: Vec<usize>,
    vars: Vec<usize>,
    domains: Vec<Vec<f64>>,
    composites: Vec<usize>,
    preflights: Preflights,
    deadline: Option<Instant>,
    stats: SolverStats,
    best: Option<Best>,
}

impl<'p, 'a> UnitSearch<'p, 'a> {
    fn new(pb: &'p Problem<'a>, members: &[usize], cfg: &SolverConfig, deadline: Option<Instant>) -> Self {
        let mut scope = vec![false; pb.m.op_count()];
        for &i in members {
            scope[i] = true;
        }
        let order: Vec<usize> = pb.st.order.iter().copied().filter(|&i| scope[i]).collect();
        let vars: Vec<usize> = order.iter().copied().filter(|&i| !pb.st.composite[i]).collect();
        let composites = order.iter().copied().filter(|&i| pb.st.composite[i]).collect();
        UnitSearch {
            pb,
            domains: vars.iter().map(|&i| pb.domain(i)).collect(),
            scope,
            order,
            vars,
            composites,
            preflights: cfg.preflights,
            deadline,
            stats: SolverStats {
                units: 1,
                ..SolverStats::default()
            },
            best: None,
        }
    }

    fn derive(&self, g: &mut Gammas) {
        for &i in &self.composites {
            let v = self.pb.st.composite_gamma(&self.pb.m, g, i);
            g.set(&self.pb.m, i, v);
        }
    }

    fn underive(&self, g: &mut Gammas) {
        for &i in self.composites.iter().rev() {
            g.unset(&self.pb.m, i);
        }
    }

    /// Scores a complete unit assignment; `None` if infeasible.
    fn score(&self, g: &Gammas) -> Option<Best> {
        if !self.pb.st.check(&self.pb.m, g, Some(&self.scope), 1).is_empty() {
            return None;
        }
        let objective = self.pb.m.objective_over(g, self.pb.mode, Some(&self.scope)).ok()?;
        Some(Best {
            objective,
            latency: self.pb.sum_latency(g, &self.scope),
            key: self.order.iter().map(|&i| g.op[i]).collect(),
            gammas: self.order.iter().map(|&i| g.op[i]).collect(),
        })
    }

    fn offer(&mut self, cand: Best) {
        if self.best.as_ref().map_or(true, |b| cand.better_than(b)) {
            self.best = Some(cand);
        }
    }

    fn run(&mut self, g: &mut Gammas) {
        // Cloud-only incumbent.
        for &i in &self.vars {
            g.set(&self.pb.m, i, 1.0);
        }
        self.derive(g);
        if let Some(b) = self.score(g) {
            self.best = Some(b);
        }
        self.underive(g);
        for &i in self.vars.iter().rev() {
            g.unset(&self.pb.m, i);
        }
        self.dfs(g, 0);
    }

    fn out_of_time(&mut self) -> bool {
        if self.stats.budget_exceeded {
            return true;
        }
        if let Some(d) = self.deadline {
            if self.stats.nodes_explored % 1024 == 0 && Instant::now() >= d {
                self.stats.budget_exceeded = true;
            }
        }
        self.stats.budget_exceeded
    }

    fn dfs(&mut self, g: &mut Gammas, depth: usize) {
        if depth == self.vars.len() {
            self.stats.leaves += 1;
            self.derive(g);
            match self.score(g) {
                Some(c) => self.offer(c),
                None => self.stats.leaves_infeasible += 1,
            }
            self.underive(g);
            return;
        }
        let i = self.vars[depth];
        for vi in 0..self.domains[depth].len() {
            if self.out_of_time() {
                return;
            }
            let v = self.domains[depth][vi];
            self.stats.nodes_explored += 1;
            g.set(&self.pb.m, i, v);
            let m = &self.pb.m;
            let pass = if self.preflights.resource && !preflight_resource(m, g, &self.scope) {
                self.stats.prunes_resource += 1;
                false
            } else if self.preflights.bound
                && self.best.as_ref().is_some_and(|b| {
                    !preflight_bound(m, g, self.pb.mode, &self.scope, b.objective)
                })
            {
                self.stats.prunes_bound += 1;
                false
            } else if self.preflights.latency && !preflight_latency(m, &self.pb.st, g, &self.scope) {
                self.stats.prunes_latency += 1;
                false
            } else {
                true
            };
            if pass {
                self.dfs(g, depth + 1);
            }
            g.unset(&self.pb.m, i);
        }
    }
}

/// Groups of operators solved independently: sensor clusters, merged when
/// they place load on a common edge node.
pub(crate) fn solve_units(w: &Workload, m: &CostModel) -> Vec<Vec<usize>> {
    let index = w.index();
    let clusters: Vec<Vec<usize>> = sensor_clusters(w)
        .into_iter()
        .map(|c| c.iter().map(|id| index[id]).collect())
        .collect();
    let mut parent: Vec<usize> = (0..clusters.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (ci, c) in clusters.iter().enumerate() {
        for &i in c {
            let nodes = m.ops[i].entries.iter().map(|e| e.node).chain(m.ops[i].nodes.iter().copied());
            for k in nodes {
                match owner.get(&k) {
                    Some(&o) => {
                        let (a, b) = (find(&mut parent, o), find(&mut parent, ci));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                    None => {
                        owner.insert(k, ci);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, c) in clusters.into_iter().enumerate() {
        let r = find(&mut parent, ci);
        groups.entry(r).or_default().extend(c);
    }
    groups
        .into_values()
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect()
}

/// Grid-optimal feasible assignment.
pub fn solve(w: &Workload, p: &Profile, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    let pb = Problem::new(w, p, cfg)?;
    let units = solve_units(w, &pb.m);
    let deadline = cfg
        .time_budget_s
        .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0)));
    let results: Vec<(Vec<usize>, Option<Best>, SolverStats)> = units
        .par_iter()
        .map(|members| {
            let mut search = UnitSearch::new(&pb, members, cfg, deadline);
            let mut g = Gammas::empty(&pb.m);
            search.run(&mut g);
            (search.order.clone(), search.best, search.stats)
        })
        .collect();

    let mut stats = SolverStats::default();
    let mut g = Gammas::empty(&pb.m);
    let mut all_found = true;
    for (order, best, s) in &results {
        stats.absorb(s);
        match best {
            Some(b) => {
                for (&i, &v) in order.iter().zip(&b.gammas) {
                    g.set(&pb.m, i, v);
                }
            }
            None => {
                all_found = false;
                for &i in order {
                    g.set(&pb.m, i, 1.0);
                }
            }
        }
    }
    let mut sol = pb.finish(&g, stats)?;
    sol.feasible &= all_found;
    Ok(sol)
}

/// Exhaustive grid enumeration without clustering or pruning.
pub fn brute_force(w: &Workload, p: &Profile, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    let pb = Problem::new(w, p, cfg)?;
    let vars: Vec<usize> = pb.st.order.iter().copied().filter(|&i| !pb.st.composite[i]).collect();
    let composites: Vec<usize> = pb.st.order.iter().copied().filter(|&i| pb.st.composite[i]).collect();
    let domains: Vec<Vec<f64>> = vars.iter().map(|&i| pb.domain(i)).collect();
    let size: f64 = domains.iter().map(|d| d.len() as f64).product();
    if size > BRUTE_FORCE_CAP {
        return Err(SolveError::TooLarge(size));
    }
    let scope = vec![true; pb.m.op_count()];
    let mut stats = SolverStats {
        units: 1,
        ..SolverStats::default()
    };
    let mut best: Option<(Best, Gammas)> = None;
    let mut digits = vec![0usize; vars.len()];
    loop {
        let mut g = Gammas::empty(&pb.m);
        for (d, &i) in vars.iter().enumerate() {
            g.set(&pb.m, i, domains[d][digits[d]]);
        }
        for &i in &composites {
            let v = pb.st.composite_gamma(&pb.m, &g, i);
            g.set(&pb.m, i, v);
        }
        stats.leaves += 1;
        stats.nodes_explored += 1;
        if pb.st.check(&pb.m, &g, None, 1).is_empty() {
            let cand = Best {
                objective: pb.m.objective(&g, pb.mode)?,
                latency: pb.sum_latency(&g, &scope),
                key: pb.st.order.iter().map(|&i| g.op[i]).collect(),
                gammas: Vec::new(),
            };
            if best.as_ref().map_or(true, |(b, _)| cand.better_than(b)) {
                best = Some((cand, g));
            }
        } else {
            stats.leaves_infeasible += 1;
        }
        // Odometer step.
        let mut d = vars.len();
        loop {
            if d == 0 {
                return match best {
                    Some((_, g)) => pb.finish(&g, stats),
                    None => {
                        let mut g = Gammas::empty(&pb.m);
                        for i in 0..pb.m.op_count() {
                            g.set(&pb.m, i, 1.0);
                        }
                        let mut sol = pb.finish(&g, stats)?;
                        sol.feasible = false;
                        Ok(sol)
                    }
                };
            }
            d -= 1;
            digits[d] += 1;
            if digits[d] < domains[d].len() {
                break;
            }
            digits[d] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::tests::{flat_profile, op};
    use crate::model::{NodeId, SensorId, Topology};

    #[test]
    fn grid_contains_one_and_steps() {
        assert_eq!(grid(0.25).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(grid(0.3).unwrap().len(), 5);
        assert_eq!(*grid(0.3).unwrap().last().unwrap(), 1.0);
        assert_eq!(grid(0.05).unwrap().len(), 21);
        assert_eq!(grid(1.0).unwrap(), vec![0.0, 1.0]);
        assert!(grid(0.0).is_err());
    }

    fn one_op(iterative: bool) -> (Workload, Profile) {
        let w = Workload::new(
            vec![op(1, &[1], &[], iterative)],
            Topology::from_wiring([(SensorId(1), NodeId(1))]),
        );
        let mut p = flat_profile(&w);
        p.data_raw.insert((OperatorId(1), SensorId(1), NodeId(1)), 800);
        p.data_int.insert(OperatorId(1), 64);
        p.data_res.insert(OperatorId(1), 8);
        (w, p)
    }

    #[test]
    fn unconstrained_edge_is_data_minimal() {
        let (w, p) = one_op(true);
        let s = solve(&w, &p, &SolverConfig::default()).unwrap();
        assert!(s.feasible);
        assert_eq!(s.objective_bytes, 8.0);
        assert_eq!(s.assignment.gamma_op[&(OperatorId(1), SensorId(1))], 0.0);
    }

    #[test]
    fn latency_bound_forces_partial_offload() {
        let (mut w, mut p) = one_op(true);
        w.operators[0].t_req_s = 1.6;
        let key = (OperatorId(1), SensorId(1), NodeId(1));
        p.cpu_edge.insert(key, 3_000_000_000);
        p.cpu_cloud.insert((OperatorId(1), SensorId(1)), 3_000_000_000);
        p.cpu_unit_edge.insert(NodeId(1), 1.5e9);
        p.cpu_unit_cloud = 3e10;
        p.bandwidth.insert(NodeId(1), 1e9);
        p.cpu_res.insert(OperatorId(1), 0);
        p.cpu_cap.insert(NodeId(1), u64::MAX);
        let cfg = SolverConfig {
            delta: 0.25,
            ..SolverConfig::default()
        };
        let s = solve(&w, &p, &cfg).unwrap();
        assert!(s.feasible);
        assert_eq!(s.assignment.gamma_op[&(OperatorId(1), SensorId(1))], 0.25);
        assert_eq!(s.objective_bytes, 264.0);
        assert_eq!(brute_force(&w, &p, &cfg).unwrap().objective_bytes, 264.0);
    }

    #[test]
    fn binary_operator_falls_back_to_cloud() {
        let (mut w, mut p) = one_op(false);
        w.operators[0].t_req_s = 0.5;
        p.cpu_edge.insert((OperatorId(1), SensorId(1), NodeId(1)), 1_000_000_000);
        let s = solve(&w, &p, &SolverConfig::default()).unwrap();
        assert!(s.feasible);
        assert_eq!(s.objective_bytes, 800.0);
    }

    #[test]
    fn empty_workload_is_trivially_feasible() {
        let w = Workload::default();
        let p = Profile {
            cpu_unit_cloud: 1.0,
            ..Profile::default()
        };
        let b = brute_force(&w, &p, &SolverConfig::default()).unwrap();
        assert!(b.feasible);
        assert_eq!(b.objective_bytes, 0.0);
        assert_eq!(solve(&w, &p, &SolverConfig::default()).unwrap().objective_bytes, 0.0);
    }

    #[test]
    fn brute_force_counts_grid_points() {
        let w = Workload::new(
            vec![op(1, &[1], &[], true), op(2, &[2], &[], true)],
            Topology::from_wiring([(SensorId(1), NodeId(1)), (SensorId(2), NodeId(2))]),
        );
        let p = flat_profile(&w);
        let cfg = SolverConfig {
            delta: 0.5,
            ..SolverConfig::default()
        };
        assert_eq!(brute_force(&w, &p, &cfg).unwrap().stats.leaves, 9);
    }

    #[test]
    fn brute_force_refuses_large_spaces() {
        let ops: Vec<_> = (1..=6).map(|i| op(i, &[i], &[], true)).collect();
        let w = Workload::new(ops, Topology::from_wiring((1..=6).map(|i| (SensorId(i), NodeId(1)))));
        let p = flat_profile(&w);
        let cfg = SolverConfig {
            delta: 0.05,
            ..SolverConfig::default()
        };
        assert!(matches!(brute_force(&w, &p, &cfg), Err(SolveError::TooLarge(_))));
    }

    #[test]
    fn preflight_examples() {
        let (w, mut p) = one_op(true);
        p.cpu_cap.insert(NodeId(1), 1_000_000);
        let m = CostModel::new(&w, &p, CostOrientation::Corrected).unwrap();
        let st = Structure::new(&w);
        let scope = vec![true];
        let mut g = Gammas::empty(&m);
        g.set(&m, 0, 0.0);
        assert!(!preflight_resource(&m, &g, &scope));
        assert!(!preflight_bound(&m, &g, ObjectiveMode::Paper, &scope, 7.0));
        assert!(preflight_bound(&m, &g, ObjectiveMode::Paper, &scope, 8.0));
        assert!(preflight_latency(&m, &st, &g, &scope));
    }
}
