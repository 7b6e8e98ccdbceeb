//! Acceptance criteria 1-8; prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::Rng;

use common::{random_profile, random_workload, rel_close, rng, spec};
use shm_offload::baselines::{cloud_only, edge_only};
use shm_offload::cli;
use shm_offload::costs::{
    self, derive_sensor_gamma, Assignment, CostModel, CostOrientation, ObjectiveMode, Profile,
};
use shm_offload::feasibility::{check_assignment, ConstraintId};
use shm_offload::model::{FunctionKind, NodeId, OperatorId, SensorId, Topology, Workload};
use shm_offload::reference::{generate_profile, reference_instance, ProfileKnobs};
use shm_offload::sim::functions::{self, is_mergeable, CloudPart, DepValue, FnContext};
use shm_offload::sim::trace::{generate_trace, StreamConfig};
use shm_offload::sim::{run_sim, SimConfig};
use shm_offload::solver::{brute_force, solve, SolverConfig};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mut feasible, mut infeasible, mut fractional) = (0, 0, 0);
    for seed in 0..200u64 {
        let mut r = rng(1000 + seed);
        let mut w = random_workload(&mut r, 4, 2);
        let p = random_profile(&mut r, &mut w);
        let cfg = SolverConfig {
            delta: if seed % 2 == 0 { 0.25 } else { 0.5 },
            objective_mode: if seed % 3 == 0 { ObjectiveMode::Dedup } else { ObjectiveMode::Paper },
            ..SolverConfig::default()
        };
        let s = solve(&w, &p, &cfg).map_err(|e| format!("seed {seed}: solve: {e}"))?;
        let b = brute_force(&w, &p, &cfg).map_err(|e| format!("seed {seed}: brute force: {e}"))?;
        check(s.feasible == b.feasible, || {
            format!("seed {seed}: feasibility differs (solve {}, brute force {})", s.feasible, b.feasible)
        })?;
        if s.feasible {
            feasible += 1;
            check(s.objective_bytes.to_bits() == b.objective_bytes.to_bits(), || {
                format!("seed {seed}: objective {} vs brute force {}", s.objective_bytes, b.objective_bytes)
            })?;
            check(s.assignment == b.assignment, || format!("seed {seed}: tie-break picked different assignments"))?;
            if s.costs.operators.iter().any(|o| o.gamma > 0.0 && o.gamma < 1.0) {
                fractional += 1;
            }
        } else {
            infeasible += 1;
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!(
        "200 instances ({feasible} feasible, {fractional} with fractional optima, {infeasible} infeasible): same feasibility, objective and assignment, {:.2} s",
        t.as_secs_f64()
    ))
}

/// One-node fixture with generous caps and no latency bounds.
fn fixture(ops: Vec<shm_offload::model::OperatorSpec>, wiring: &[(u32, u32)]) -> (Workload, Profile) {
    let w = Workload::new(
        ops,
        Topology::from_wiring(wiring.iter().map(|&(s, k)| (SensorId(s), NodeId(k)))),
    );
    let p = generate_profile(&w, &ProfileKnobs::default());
    (w, p)
}

fn assign(w: &Workload, gammas: &[(u32, f64)]) -> Assignment {
    let mut a = Assignment::default();
    for &(id, g) in gammas {
        a.set_operator(w.operator(OperatorId(id)).unwrap(), g);
    }
    derive_sensor_gamma(&a, w).unwrap()
}

fn ids(w: &Workload, p: &Profile, a: &Assignment) -> Result<Vec<ConstraintId>, String> {
    check_assignment(w, p, a, CostOrientation::Corrected)
        .map(|v| v.iter().map(|x| x.constraint).collect())
        .map_err(|e| e.to_string())
}

fn constraint_case(c: ConstraintId) -> Result<(), String> {
    use ConstraintId::*;
    let mean = |id, s: Vec<u32>, deps: Vec<u32>| {
        spec(
            id,
            s.into_iter().map(SensorId).collect(),
            deps.into_iter().map(OperatorId).collect(),
            FunctionKind::Mean,
            60.0,
        )
    };
    let max = |id, s: Vec<u32>| spec(id, s.into_iter().map(SensorId).collect(), vec![], FunctionKind::Max, 60.0);
    // (workload, profile, violating, satisfying)
    let (w, p, bad, good): (Workload, Profile, Assignment, Assignment) = match c {
        C1 => {
            let (w, p) = fixture(vec![mean(1, vec![1], vec![])], &[(1, 1)]);
            let (b, g) = (assign(&w, &[(1, 1.2)]), assign(&w, &[(1, 0.4)]));
            (w, p, b, g)
        }
        C2 => {
            let (w, p) = fixture(vec![max(1, vec![1])], &[(1, 1)]);
            let (b, g) = (assign(&w, &[(1, 0.5)]), assign(&w, &[(1, 0.0)]));
            (w, p, b, g)
        }
        C3 => {
            let (w, p) = fixture(vec![mean(1, vec![1, 2], vec![])], &[(1, 1), (2, 1)]);
            let mut b = Assignment::default();
            b.gamma_op.insert((OperatorId(1), SensorId(1)), 0.2);
            b.gamma_op.insert((OperatorId(1), SensorId(2)), 0.6);
            let b = derive_sensor_gamma(&b, &w).unwrap();
            let g = assign(&w, &[(1, 0.6)]);
            (w, p, b, g)
        }
        C4 => {
            let (mut w, p) = fixture(vec![mean(1, vec![1], vec![])], &[(1, 1)]);
            let good_w = w.clone();
            w.topology.sensor_node.insert(SensorId(1), NodeId(9));
            let b = assign(&w, &[(1, 1.0)]);
            let g = assign(&good_w, &[(1, 1.0)]);
            check(ids(&w, &p, &b)? == vec![C4], || format!("C4 case gave {:?}", ids(&w, &p, &b)))?;
            return check(ids(&good_w, &p, &g)?.is_empty(), || "C4 satisfying case not clean".into());
        }
        C5 => {
            let (mut w, p) = fixture(vec![mean(1, vec![1], vec![])], &[(1, 1)]);
            let good_w = w.clone();
            w.topology.sensor_node.remove(&SensorId(1));
            let b = assign(&w, &[(1, 1.0)]);
            let g = assign(&good_w, &[(1, 1.0)]);
            check(ids(&w, &p, &b)? == vec![C5], || format!("C5 case gave {:?}", ids(&w, &p, &b)))?;
            return check(ids(&good_w, &p, &g)?.is_empty(), || "C5 satisfying case not clean".into());
        }
        C6 => {
            let (w, p) = fixture(vec![mean(1, vec![1, 2], vec![])], &[(1, 1), (2, 2)]);
            let (b, g) = (assign(&w, &[(1, 0.0)]), assign(&w, &[(1, 1.0)]));
            (w, p, b, g)
        }
        C7 => {
            let (w, p) = fixture(
                vec![mean(1, vec![1], vec![]), mean(2, vec![2], vec![]), mean(3, vec![], vec![1, 2])],
                &[(1, 1), (2, 2)],
            );
            let (b, g) = (
                assign(&w, &[(1, 1.0), (2, 1.0), (3, 0.0)]),
                assign(&w, &[(1, 1.0), (2, 1.0), (3, 1.0)]),
            );
            (w, p, b, g)
        }
        C8 => {
            let (w, p) = fixture(vec![mean(1, vec![1], vec![]), mean(2, vec![], vec![1])], &[(1, 1)]);
            let (b, g) = (assign(&w, &[(1, 0.5), (2, 0.0)]), assign(&w, &[(1, 0.5), (2, 1.0)]));
            (w, p, b, g)
        }
        C9 => {
            let (w, p) = fixture(
                vec![mean(1, vec![1], vec![]), mean(2, vec![2], vec![]), mean(3, vec![], vec![1, 2])],
                &[(1, 1), (2, 1)],
            );
            let (b, g) = (
                assign(&w, &[(1, 1.0), (2, 0.0), (3, 1.0)]),
                assign(&w, &[(1, 1.0), (2, 0.0), (3, 0.0)]),
            );
            (w, p, b, g)
        }
        C10 => {
            let (mut w, p) = fixture(vec![mean(1, vec![1], vec![])], &[(1, 1)]);
            let a = assign(&w, &[(1, 1.0)]);
            let t = costs::evaluate(&w, &p, &a, CostOrientation::Corrected, ObjectiveMode::Paper)
                .unwrap()
                .operators[0]
                .t_total_s;
            w.operators[0].t_req_s = 0.5 * t;
            let g = assign(&w, &[(1, 0.0)]);
            check(t > 0.0, || "C10 fixture has zero latency".into())?;
            (w, p, a, g)
        }
        C11 => {
            let (w, mut p) = fixture(vec![mean(1, vec![1], vec![])], &[(1, 1)]);
            let cycles = p.cpu_edge.values().sum::<u64>();
            p.cpu_cap.insert(NodeId(1), cycles / 2);
            let (b, g) = (assign(&w, &[(1, 0.0)]), assign(&w, &[(1, 0.7)]));
            (w, p, b, g)
        }
        C12 => {
            let (w, mut p) = fixture(vec![mean(1, vec![1], vec![])], &[(1, 1)]);
            let mem = p.mem_edge.values().sum::<u64>();
            p.mem_cap.insert(NodeId(1), mem);
            let (b, g) = (assign(&w, &[(1, 0.0)]), assign(&w, &[(1, 0.05)]));
            (w, p, b, g)
        }
    };
    let got = ids(&w, &p, &bad)?;
    check(got == vec![c], || format!("{c} violating case gave {got:?}"))?;
    let got = ids(&w, &p, &good)?;
    check(got.is_empty(), || format!("{c} satisfying case gave {got:?}"))
}

fn criterion_2() -> Outcome {
    use ConstraintId::*;
    for c in [C1, C2, C3, C4, C5, C6, C7, C8, C9, C10, C11, C12] {
        constraint_case(c)?;
    }
    let cfg = SolverConfig::default();
    for seed in 0..100u64 {
        let mut r = rng(5000 + seed);
        let mut w = random_workload(&mut r, 6, 3);
        let p = random_profile(&mut r, &mut w);
        let co = cloud_only(&w, &p, &cfg).map_err(|e| e.to_string())?;
        let structural: Vec<_> = co
            .violations
            .iter()
            .filter(|v| !matches!(v.constraint, C10 | C11 | C12))
            .collect();
        check(structural.is_empty(), || format!("seed {seed}: cloud_only violates {structural:?}"))?;
    }
    Ok("C1..C12 each isolated by a crafted pair; cloud_only clean on C1..C9 for 100 workloads".into())
}

fn criterion_3() -> Outcome {
    let mut fractional = 0;
    for seed in 0..1000u64 {
        let mut r = rng(9000 + seed);
        let mut w = random_workload(&mut r, 4, 2);
        let p = random_profile(&mut r, &mut w);
        let m = CostModel::new(&w, &p, CostOrientation::Corrected).map_err(|e| e.to_string())?;
        // Random grid or off-grid ratios for atomic operators, extremes for
        // binary ones; composites propagated.
        let mut a = Assignment::default();
        for op in &w.operators {
            let g = if !op.iterative || r.gen_bool(0.4) {
                f64::from(r.gen_range(0..=1u8))
            } else {
                r.gen_range(0.0..1.0)
            };
            a.set_operator(op, g);
        }
        let a = shm_offload::feasibility::propagate_composite_gamma(&w, &p, &a).map_err(|e| e.to_string())?;
        let g = m.gammas(&w, &a).map_err(|e| e.to_string())?;
        let report = costs::evaluate(&w, &p, &a, CostOrientation::Corrected, ObjectiveMode::Paper)
            .map_err(|e| e.to_string())?;
        let mut memo = BTreeMap::new();
        for (i, op) in w.operators.iter().enumerate() {
            let gi = a.operator_gamma(op).map_err(|e| e.to_string())?;
            if gi > 0.0 && gi < 1.0 {
                fractional += 1;
            }
            let home = w.home_node(op);
            for k in w.operator_nodes(op) {
                // Piecewise volume from the profile's integer coefficients.
                let raw: f64 = op
                    .sensors
                    .iter()
                    .filter(|s| w.topology.node_of(**s) == Some(k))
                    .map(|s| p.data_raw[&(op.id, *s, k)] as f64 * a.gamma_sensor[s])
                    .sum();
                let mut expect = raw;
                if home == Some(k) {
                    if gi == 0.0 {
                        expect += p.data_res[&op.id] as f64;
                    } else if gi < 1.0 {
                        expect += p.data_int[&op.id] as f64;
                    }
                }
                let got = costs::data_volume(&w, &p, &a, op.id, k).map_err(|e| e.to_string())?;
                let integral = op.sensors.iter().all(|s| {
                    let v = a.gamma_sensor[s];
                    v == 0.0 || v == 1.0
                });
                if integral {
                    check(got == expect && got.fract() == 0.0, || {
                        format!("seed {seed} {}: volume {got} vs {expect}", op.id)
                    })?;
                } else {
                    check(rel_close(got, expect, 1e-9), || format!("seed {seed} {}: volume {got} vs {expect}", op.id))?;
                }
                let cpu = costs::node_cpu(&w, &p, &a, op.id, k, CostOrientation::Corrected).unwrap();
                let mem = costs::node_mem(&w, &p, &a, op.id, k, CostOrientation::Corrected).unwrap();
                if gi == 1.0 {
                    check(cpu == 0.0 && mem == 0.0, || format!("seed {seed} {}: edge load at gamma 1", op.id))?;
                }
            }
            let row = &report.operators[i];
            let sum = row.t_edge_s + row.t_trans_s + row.t_wait_s + row.t_cloud_s;
            check(row.t_total_s == sum, || format!("seed {seed} {}: parts {sum} vs total {}", op.id, row.t_total_s))?;
            let t = costs::total_latency(&w, &p, &a, op.id, CostOrientation::Corrected, &mut memo).unwrap();
            check(rel_close(t, row.t_total_s, 1e-9), || format!("seed {seed} {}: latency {t}", op.id))?;
            if op.is_atomic() {
                check(row.t_wait_s == 0.0, || format!("seed {seed} {}: atomic wait {}", op.id, row.t_wait_s))?;
            }
            if gi == 1.0 {
                check(row.t_edge_s == 0.0, || format!("seed {seed} {}: edge time at gamma 1", op.id))?;
            }
            if gi == 0.0 {
                check(row.t_cloud_s == 0.0, || format!("seed {seed} {}: cloud time at gamma 0", op.id))?;
            }
            // Timing terms against the profile, at this operator's ratio.
            let cycles: f64 = op.sensors.iter().map(|s| p.cpu_cloud[&(op.id, *s)] as f64 * gi).sum::<f64>()
                + if gi > 0.0 { p.cpu_res[&op.id] as f64 } else { 0.0 };
            let cloud = cycles / p.cpu_unit_cloud;
            check(rel_close(row.t_cloud_s, cloud, 1e-9), || {
                format!("seed {seed} {}: cloud {} vs {cloud}", op.id, row.t_cloud_s)
            })?;
            let _ = &g;
        }
    }
    Ok(format!("1000 draws ({fractional} fractional operator ratios) satisfy the identities"))
}

fn channels_for(f: FunctionKind) -> usize {
    use FunctionKind::*;
    match f {
        Cov | Cc => 2,
        Avgws | Avgwa | Gf | Fws | Ti | Awd => 2,
        Aoa => 3,
        _ => 1,
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let funcs: Vec<FunctionKind> = FunctionKind::ALL.iter().copied().filter(|f| is_mergeable(*f)).collect();
    let mut r = rng(77);
    let mut cases = 0;
    let mut worst: f64 = 0.0;
    for &f in &funcs {
        for win in 0..100 {
            let n = r.gen_range(20..400usize);
            let ch = channels_for(f);
            let offset: f64 = r.gen_range(-5.0..20.0);
            let data: Vec<Vec<f64>> = (0..ch)
                .map(|_| (0..n).map(|_| offset + r.gen_range(-3.0..3.0)).collect())
                .collect();
            let c: Vec<&[f64]> = data.iter().map(Vec::as_slice).collect();
            let deps = vec![DepValue {
                current: Some(vec![r.gen_range(0.0..5.0)]),
                previous: Some(vec![r.gen_range(0.0..5.0)]),
            }];
            let ctx = FnContext {
                gust_samples: r.gen_range(1..=10),
                ..FnContext::default()
            };
            let mono = functions::eval_function(f, &ctx, &c, &deps);
            for step in 0..=10 {
                let gamma = step as f64 / 10.0;
                // Alternate a contiguous split and a scattered one.
                let cloud_pos: Vec<bool> = if win % 2 == 0 {
                    let k = ((1.0 - gamma) * n as f64).round() as usize;
                    (0..n).map(|m| m >= k).collect()
                } else {
                    (0..n).map(|m| shm_offload::sim::engine::split_key(m as u64) < gamma).collect()
                };
                let edge_idx: Vec<usize> = (0..n).filter(|&m| !cloud_pos[m]).collect();
                let cloud_idx: Vec<usize> = (0..n).filter(|&m| cloud_pos[m]).collect();
                let edge = functions::partial_eval(f, &ctx, &c, &edge_idx).map_err(|e| e.to_string())?;
                let merged = functions::merge(f, &ctx, &edge, CloudPart::Samples(&c, &cloud_idx), ch, &deps)
                    .map_err(|e| e.to_string())?;
                check(merged.len() == mono.len(), || format!("{}: arity differs", f.name()))?;
                for (a, b) in merged.iter().zip(&mono) {
                    let err = if a == b { 0.0 } else { (a - b).abs() / b.abs() };
                    worst = worst.max(err);
                    check(err <= 1e-9, || {
                        format!("{} window {win} gamma {gamma}: merged {a} vs monolithic {b}", f.name())
                    })?;
                }
                cases += 1;
            }
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!(
        "{} functions, {cases} splits, worst relative error {worst:.2e}, {:.2} s",
        funcs.len(),
        t.as_secs_f64()
    ))
}

fn criterion_5() -> Outcome {
    let (w, p) = reference_instance(&ProfileKnobs::default(), 0.10);
    let cfg = SolverConfig::default();
    let s = solve(&w, &p, &cfg).map_err(|e| e.to_string())?;
    let co = cloud_only(&w, &p, &cfg).map_err(|e| e.to_string())?;
    let eo = edge_only(&w, &p, &cfg).map_err(|e| e.to_string())?;
    check(s.feasible && s.violations.is_empty(), || format!("solve infeasible: {:?}", s.violations))?;
    for (row, op) in s.costs.operators.iter().zip(&w.operators) {
        check(row.t_total_s <= op.t_req_s * (1.0 + 1e-9), || {
            format!("{} misses its bound: {} > {}", op.id, row.t_total_s, op.t_req_s)
        })?;
    }
    for (name, b) in [("CO", &co), ("EO", &eo)] {
        if b.feasible {
            check(s.objective_bytes <= b.objective_bytes, || {
                format!("solve {} above feasible {name} {}", s.objective_bytes, b.objective_bytes)
            })?;
        }
    }
    check(co.feasible, || "CO is infeasible on the reference".into())?;
    let reduction = (co.objective_bytes - s.objective_bytes) / co.objective_bytes * 100.0;
    check(reduction >= 50.0, || format!("reduction vs CO only {reduction:.2}%"))?;
    let eo_note = if eo.feasible {
        format!("EO {:.0} B", eo.objective_bytes)
    } else {
        format!(
            "EO infeasible ({} bound violations, {:.0} B, not comparable)",
            eo.violations.len(),
            eo.objective_bytes
        )
    };
    Ok(format!(
        "solve {:.0} B, CO {:.0} B, reduction {reduction:.2}%, {eo_note}, all 63 bounds met",
        s.objective_bytes, co.objective_bytes
    ))
}

fn criterion_6() -> Outcome {
    let (w, p) = reference_instance(&ProfileKnobs::default(), 0.10);
    let cfg = SolverConfig::default();
    let s = solve(&w, &p, &cfg).map_err(|e| e.to_string())?;
    let co = cloud_only(&w, &p, &cfg).map_err(|e| e.to_string())?;
    let eo = edge_only(&w, &p, &cfg).map_err(|e| e.to_string())?;
    let trace = generate_trace(
        &StreamConfig {
            duration_s: 3600.0,
            seed: 11,
            ..StreamConfig::default()
        },
        w.sensors.iter().copied(),
    );
    let m = CostModel::new(&w, &p, CostOrientation::Corrected).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (name, a) in [("CO", &co.assignment), ("EO", &eo.assignment), ("solve", &s.assignment)] {
        let r = run_sim(&w, &p, a, &trace, &SimConfig::default()).map_err(|e| e.to_string())?;
        check(r.totals.uplink_bytes == r.totals.frame_bytes, || format!("{name}: frame bytes not conserved"))?;
        let g = m.gammas(&w, a).map_err(|e| e.to_string())?;
        let analytic = m
            .horizon_bytes(&w, &g, trace.len() as u64, trace.sample_rate_hz, ObjectiveMode::Dedup)
            .map_err(|e| e.to_string())?;
        let sim = r.totals.payload_bytes as f64;
        let rel = if analytic == 0.0 { sim } else { (sim - analytic).abs() / analytic };
        check(rel <= 0.05, || format!("{name}: sim {sim} vs analytic {analytic} ({:.2}%)", rel * 100.0))?;
        parts.push(format!("{name} {sim:.0}/{analytic:.0} ({:.3}%)", rel * 100.0));
    }
    Ok(format!("1 h horizon, sim/analytic payload bytes: {}", parts.join(", ")))
}

fn criterion_7() -> Outcome {
    let (w, p) = reference_instance(&ProfileKnobs::default(), 0.10);
    let start = Instant::now();
    let s = solve(&w, &p, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    check(t < Duration::from_secs(300), || format!("solve took {t:?}"))?;
    let st = &s.stats;
    check(st.nodes_explored > 0, || "no nodes recorded".into())?;
    let report = serde_json::to_value(&s).unwrap();
    for key in ["nodes_explored", "prunes_resource", "prunes_bound", "prunes_latency"] {
        check(report["stats"].get(key).is_some(), || format!("report lacks stats.{key}"))?;
    }
    Ok(format!(
        "delta 0.05 in {:.2} s: {} nodes, prunes resource {} / bound {} / latency {}",
        t.as_secs_f64(),
        st.nodes_explored,
        st.prunes_resource,
        st.prunes_bound,
        st.prunes_latency
    ))
}

fn run_cli(args: &[&str]) -> (u8, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("shm-offload").chain(args.iter().copied()), &mut out, &mut err);
    out.extend(err);
    (code, out)
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).display().to_string();
    let (wl, pf, tr) = (path("w.workload"), path("p.json"), path("t.bin"));
    let (ecs, co, eo) = (path("ecs.json"), path("co.json"), path("eo.json"));
    let sim = path("sim.json");
    let cmp = path("cmp.json");
    let val = path("val.json");
    let commands: Vec<(Vec<String>, String, u8)> = vec![
        (vec!["gen-workload".into(), "--out".into(), wl.clone()], wl.clone(), 0),
        (vec!["gen-profile".into(), "--out".into(), pf.clone()], pf.clone(), 0),
        (
            vec!["gen-trace".into(), "--seed".into(), "3".into(), "--duration".into(), "900".into(), "--out".into(), tr.clone()],
            tr.clone(),
            0,
        ),
        (vec!["validate".into(), "--workload".into(), wl.clone(), "--out".into(), val.clone()], val.clone(), 0),
        (
            vec!["solve".into(), "--workload".into(), wl.clone(), "--profile".into(), pf.clone(), "--out".into(), ecs.clone()],
            ecs.clone(),
            0,
        ),
        (vec!["baseline".into(), "--strategy".into(), "co".into(), "--out".into(), co.clone()], co.clone(), 0),
        (vec!["baseline".into(), "--strategy".into(), "eo".into(), "--out".into(), eo.clone()], eo.clone(), 2),
        (
            vec![
                "simulate".into(),
                "--workload".into(),
                wl.clone(),
                "--profile".into(),
                pf.clone(),
                "--assignment".into(),
                ecs.clone(),
                "--trace".into(),
                tr.clone(),
                "--out".into(),
                sim.clone(),
            ],
            sim.clone(),
            0,
        ),
        (vec!["compare".into(), co.clone(), eo.clone(), ecs.clone(), sim.clone(), "--out".into(), cmp.clone()], cmp.clone(), 0),
    ];
    let mut names = Vec::new();
    for (args, out_file, want) in &commands {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c1, o1) = run_cli(&argv);
        let f1 = std::fs::read(out_file).map_err(|e| format!("{}: {e}", args[0]))?;
        let (c2, o2) = run_cli(&argv);
        let f2 = std::fs::read(out_file).map_err(|e| format!("{}: {e}", args[0]))?;
        check(c1 == *want && c2 == *want, || {
            format!("{}: exit codes {c1}/{c2}, expected {want}: {}", args[0], String::from_utf8_lossy(&o1))
        })?;
        check(f1 == f2, || format!("{}: report bytes differ between runs", args[0]))?;
        check(o1 == o2, || format!("{}: standard output differs between runs", args[0]))?;
        names.push(args[0].clone());
    }
    // The bundled inputs reproduce the built-in ones.
    let bundled = |rel: &str| std::fs::read(format!("{}/../../data/{rel}", env!("CARGO_MANIFEST_DIR")));
    let ok_w = bundled("reference.workload").map_err(|e| e.to_string())? == std::fs::read(&wl).unwrap();
    let ok_p = bundled("reference_profile.json").map_err(|e| e.to_string())? == std::fs::read(&pf).unwrap();
    check(ok_w && ok_p, || "bundled reference files differ from generated ones".into())?;
    Ok(format!("byte-identical reports across repeated runs of: {}", names.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("oracle equivalence", criterion_1),
        ("constraint suite", criterion_2),
        ("cost-model identities", criterion_3),
        ("split-merge equivalence", criterion_4),
        ("baseline dominance", criterion_5),
        ("analytic/simulated bytes", criterion_6),
        ("scale", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {} ({name}): PASS: {msg}", n + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {msg}", n + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
