//! Workload file grammar.
//!
//! ```text
//! # comment (anywhere after '#')
//! [nodes]                      optional; whitespace/comma separated ids
//! 1 2 3
//! [sensors]                    optional labels
//! 7 bridge.RHS
//! [operators]
//! id | sensors | deps | func | iter | window_s | step_s | freq_s | t_req_s
//! 1  | 7,8     | -    | mean | 1    | 60       | 60     | 60     | inf
//! [topology]
//! 7 -> 1
//! ```
//!
//! Lists are comma separated; `-` is the empty list. Durations are seconds.
//! Without a `[nodes]` section the node set is every wiring target.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::model::{FunctionKind, NodeId, OperatorId, OperatorSpec, SensorId, Topology, Workload};

type ParseResult<T> = Result<T, (usize, String)>;

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Nodes,
    Sensors,
    Operators,
    Topology,
}

fn parse_u32(s: &str, what: &str, line: usize) -> ParseResult<u32> {
    s.trim()
        .parse()
        .map_err(|_| (line, format!("bad {what} id '{}'", s.trim())))
}

fn parse_list(s: &str, what: &str, line: usize) -> ParseResult<Vec<u32>> {
    let s = s.trim();
    if s == "-" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_u32(x, what, line)).collect()
}

fn parse_secs(s: &str, what: &str, line: usize) -> ParseResult<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    s.parse()
        .map_err(|_| (line, format!("bad {what} '{s}'")))
}

/// Parses a workload; errors carry the 1-based line number.
pub fn parse_workload(text: &str) -> ParseResult<Workload> {
    let mut section = Section::None;
    let mut declared_nodes: Option<BTreeSet<NodeId>> = None;
    let mut labels = BTreeMap::new();
    let mut operators = Vec::new();
    let mut wiring = BTreeMap::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if body.starts_with('[') {
            section = match body {
                "[nodes]" => Section::Nodes,
                "[sensors]" => Section::Sensors,
                "[operators]" => Section::Operators,
                "[topology]" => Section::Topology,
                other => return Err((line, format!("unknown section {other}"))),
            };
            if section == Section::Nodes {
                declared_nodes.get_or_insert_with(BTreeSet::new);
            }
            continue;
        }
        match section {
            Section::None => return Err((line, "content before any section".into())),
            Section::Nodes => {
                let nodes = declared_nodes.get_or_insert_with(BTreeSet::new);
                for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
                    if !tok.is_empty() {
                        nodes.insert(NodeId(parse_u32(tok, "node", line)?));
                    }
                }
            }
            Section::Sensors => {
                let (id, label) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
                labels.insert(SensorId(parse_u32(id, "sensor", line)?), label.trim().to_string());
            }
            Section::Operators => {
                let cols: Vec<&str> = body.split('|').collect();
                if cols.len() != 9 {
                    return Err((line, format!("expected 9 columns, found {}", cols.len())));
                }
                let func: FunctionKind = cols[3]
                    .trim()
                    .parse()
                    .map_err(|e: crate::model::UnknownFunction| (line, e.to_string()))?;
                let iterative = match cols[4].trim() {
                    "1" => true,
                    "0" => false,
                    other => return Err((line, format!("iter must be 0 or 1, found '{other}'"))),
                };
                operators.push(OperatorSpec {
                    id: OperatorId(parse_u32(cols[0], "operator", line)?),
                    sensors: parse_list(cols[1], "sensor", line)?.into_iter().map(SensorId).collect(),
                    deps: parse_list(cols[2], "operator", line)?.into_iter().map(OperatorId).collect(),
                    func,
                    iterative,
                    window_s: parse_secs(cols[5], "window", line)?,
                    step_s: parse_secs(cols[6], "step", line)?,
                    freq_s: parse_secs(cols[7], "freq", line)?,
                    t_req_s: parse_secs(cols[8], "t_req", line)?,
                });
            }
            Section::Topology => {
                let (s, k) = body
                    .split_once("->")
                    .ok_or((line, "expected 'sensor -> node'".to_string()))?;
                let s = SensorId(parse_u32(s, "sensor", line)?);
                let k = NodeId(parse_u32(k, "node", line)?);
                if wiring.insert(s, k).is_some() {
                    return Err((line, format!("sensor {s} wired twice")));
                }
            }
        }
    }

    let mut topology = Topology::from_wiring(wiring);
    if let Some(nodes) = declared_nodes {
        topology.nodes = nodes;
    }
    let mut w = Workload::new(operators, topology);
    w.sensors.extend(labels.keys().copied());
    w.sensor_labels = labels;
    Ok(w)
}

fn join<T: Copy>(xs: &[T], f: impl Fn(T) -> u32) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.iter().map(|&x| f(x).to_string()).collect::<Vec<_>>().join(",")
    }
}

fn secs(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v}")
    }
}

/// Canonical text form; `parse_workload` round-trips it.
pub fn write_workload(w: &Workload) -> String {
    let mut out = String::new();
    out.push_str("[nodes]\n");
    let nodes: Vec<String> = w.topology.nodes.iter().map(|n| n.0.to_string()).collect();
    if !nodes.is_empty() {
        let _ = writeln!(out, "{}", nodes.join(" "));
    }
    if !w.sensor_labels.is_empty() {
        out.push_str("\n[sensors]\n");
        for (s, l) in &w.sensor_labels {
            let _ = writeln!(out, "{} {}", s.0, l);
        }
    }
    out.push_str("\n[operators]\n# id | sensors | deps | func | iter | window_s | step_s | freq_s | t_req_s\n");
    for o in &w.operators {
        let _ = writeln!(
            out,
            "{} | {} | {} | {} | {} | {} | {} | {} | {}",
            o.id.0,
            join(&o.sensors, |s| s.0),
            join(&o.deps, |d| d.0),
            o.func.name(),
            u8::from(o.iterative),
            secs(o.window_s),
            secs(o.step_s),
            secs(o.freq_s),
            secs(o.t_req_s),
        );
    }
    out.push_str("\n[topology]\n");
    for (s, k) in &w.topology.sensor_node {
        let _ = writeln!(out, "{} -> {}", s.0, k.0);
    }
    out
}
