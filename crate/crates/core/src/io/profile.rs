use serde::{Deserialize, Serialize};

use crate::costs::Profile;
use crate::error::{Error, Result};
use crate::model::{NodeId, OperatorId, SensorId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub node: NodeId,
    pub cpu_unit_edge: f64,
    pub bandwidth: f64,
    pub cpu_cap: u64,
    pub mem_cap: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub op: OperatorId,
    pub cpu_res: u64,
    pub data_int: u64,
    pub data_res: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub op: OperatorId,
    pub sensor: SensorId,
    pub node: NodeId,
    pub cpu_edge: u64,
    pub cpu_cloud: u64,
    pub mem_edge: u64,
    pub data_raw: u64,
}

/// On-disk profile: one record per node, per operator and per
/// (operator, sensor, node) entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub cpu_unit_cloud: f64,
    pub nodes: Vec<NodeRecord>,
    pub operators: Vec<OperatorRecord>,
    pub entries: Vec<EntryRecord>,
}

impl From<&Profile> for ProfileFile {
    fn from(p: &Profile) -> Self {
        let nodes = p
            .cpu_unit_edge
            .keys()
            .chain(p.bandwidth.keys())
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|n| NodeRecord {
                node: n,
                cpu_unit_edge: p.cpu_unit_edge.get(&n).copied().unwrap_or(0.0),
                bandwidth: p.bandwidth.get(&n).copied().unwrap_or(0.0),
                cpu_cap: p.cpu_cap.get(&n).copied().unwrap_or(0),
                mem_cap: p.mem_cap.get(&n).copied().unwrap_or(0),
            })
            .collect();
        let operators = p
            .cpu_res
            .keys()
            .chain(p.data_int.keys())
            .chain(p.data_res.keys())
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|o| OperatorRecord {
                op: o,
                cpu_res: p.cpu_res.get(&o).copied().unwrap_or(0),
                data_int: p.data_int.get(&o).copied().unwrap_or(0),
                data_res: p.data_res.get(&o).copied().unwrap_or(0),
            })
            .collect();
        let entries = p
            .data_raw
            .keys()
            .chain(p.cpu_edge.keys())
            .chain(p.mem_edge.keys())
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|(o, s, k)| EntryRecord {
                op: o,
                sensor: s,
                node: k,
                cpu_edge: p.cpu_edge.get(&(o, s, k)).copied().unwrap_or(0),
                cpu_cloud: p.cpu_cloud.get(&(o, s)).copied().unwrap_or(0),
                mem_edge: p.mem_edge.get(&(o, s, k)).copied().unwrap_or(0),
                data_raw: p.data_raw.get(&(o, s, k)).copied().unwrap_or(0),
            })
            .collect();
        ProfileFile {
            cpu_unit_cloud: p.cpu_unit_cloud,
            nodes,
            operators,
            entries,
        }
    }
}

impl TryFrom<ProfileFile> for Profile {
    type Error = Error;

    fn try_from(f: ProfileFile) -> Result<Profile> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Input(format!("profile: {what} must be positive and finite, got {v}")))
            }
        };
        let mut p = Profile {
            cpu_unit_cloud: positive(f.cpu_unit_cloud, "cpu_unit_cloud")?,
            ..Profile::default()
        };
        for n in f.nodes {
            p.cpu_unit_edge.insert(n.node, positive(n.cpu_unit_edge, "cpu_unit_edge")?);
            p.bandwidth.insert(n.node, positive(n.bandwidth, "bandwidth")?);
            p.cpu_cap.insert(n.node, n.cpu_cap);
            p.mem_cap.insert(n.node, n.mem_cap);
        }
        for o in f.operators {
            p.cpu_res.insert(o.op, o.cpu_res);
            p.data_int.insert(o.op, o.data_int);
            p.data_res.insert(o.op, o.data_res);
        }
        for e in f.entries {
            let key = (e.op, e.sensor, e.node);
            if p.data_raw.insert(key, e.data_raw).is_some() {
                return Err(Error::Input(format!("profile: duplicate entry ({}, {}, {})", e.op, e.sensor, e.node)));
            }
            p.cpu_edge.insert(key, e.cpu_edge);
            p.mem_edge.insert(key, e.mem_edge);
            p.cpu_cloud.insert((e.op, e.sensor), e.cpu_cloud);
        }
        Ok(p)
    }
}

pub fn profile_to_json(p: &Profile) -> String {
    let mut s = serde_json::to_string_pretty(&ProfileFile::from(p)).expect("profile serializes");
    s.push('\n');
    s
}

pub fn profile_from_json(text: &str) -> Result<Profile> {
    let f: ProfileFile = serde_json::from_str(text)?;
    Profile::try_from(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_profile_round_trips() {
        let (_, p) = crate::reference::reference_instance(&Default::default(), 0.1);
        let text = profile_to_json(&p);
        let back = profile_from_json(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(profile_to_json(&back), text);
    }

    #[test]
    fn rejects_zero_bandwidth() {
        let text = r#"{"cpu_unit_cloud": 1.0,
            "nodes": [{"node": 1, "cpu_unit_edge": 1.0, "bandwidth": 0.0, "cpu_cap": 1, "mem_cap": 1}],
            "operators": [], "entries": []}"#;
        assert!(profile_from_json(text).is_err());
    }
}
