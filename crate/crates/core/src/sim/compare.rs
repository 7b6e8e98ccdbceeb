//! Side-by-side comparison of run reports.
//!
//! Reports are read as JSON values so that solve, baseline and simulate
//! records can be mixed. Percentages are reductions against the first run.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::model::OperatorId;

/// Per-operator figures of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpFigures {
    pub bytes: f64,
    pub latency_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub label: String,
    pub ops: BTreeMap<OperatorId, OpFigures>,
    pub total_bytes: f64,
}

#[derive(Debug, thiserror::Error)]
#[error("{label}: {message}")]
pub struct SummaryError {
    pub label: String,
    pub message: String,
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

impl RunSummary {
    /// Reads a solve/baseline report (analytic rows) or a simulate report
    /// (measured payload bytes and mean latency).
    pub fn from_report(label: &str, v: &Value) -> Result<RunSummary, SummaryError> {
        let err = |m: &str| SummaryError {
            label: label.to_string(),
            message: m.to_string(),
        };
        let mut ops = BTreeMap::new();
        let total_bytes;
        if let Some(sim) = v.get("sim") {
            let rows = sim.get("operators").and_then(Value::as_array).ok_or_else(|| err("sim report without operators"))?;
            for r in rows {
                let op = r.get("op").and_then(Value::as_u64).ok_or_else(|| err("operator row without op"))?;
                let bytes: f64 = ["raw", "intermediate", "result"]
                    .iter()
                    .map(|k| num(&r[k]["payload_bytes"]))
                    .sum();
                ops.insert(
                    OperatorId(op as u32),
                    OpFigures {
                        bytes,
                        latency_s: num(&r["latency_mean_s"]),
                    },
                );
            }
            total_bytes = num(&sim["totals"]["payload_bytes"]);
        } else {
            let rows = v
                .get("costs")
                .and_then(|c| c.get("operators"))
                .and_then(Value::as_array)
                .ok_or_else(|| err("report has neither cost rows nor a sim section"))?;
            for r in rows {
                let op = r.get("op").and_then(Value::as_u64).ok_or_else(|| err("operator row without op"))?;
                let bytes = r["data_bytes"]
                    .as_object()
                    .map(|m| m.values().map(num).sum())
                    .unwrap_or(f64::NAN);
                ops.insert(
                    OperatorId(op as u32),
                    OpFigures {
                        bytes,
                        latency_s: num(&r["t_total_s"]),
                    },
                );
            }
            total_bytes = num(&v["objective_bytes"]);
        }
        Ok(RunSummary {
            label: label.to_string(),
            ops,
            total_bytes,
        })
    }
}

/// A table cell: a number, an undefined value, or an operator absent from
/// that run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Undefined,
    Missing,
}

impl Cell {
    fn of(v: f64) -> Cell {
        if v.is_finite() {
            Cell::Value(v)
        } else {
            Cell::Undefined
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Value(v) => format!("{v:.6}"),
            Cell::Undefined => "n/a".into(),
            Cell::Missing => "gap".into(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Value(v) => s.serialize_f64(*v),
            Cell::Undefined => s.serialize_none(),
            Cell::Missing => s.serialize_str("missing"),
        }
    }
}

/// Percentage reduction of `x` against `base`.
pub fn reduction_pct(base: f64, x: f64) -> Cell {
    if !base.is_finite() || !x.is_finite() {
        return Cell::Undefined;
    }
    if base == 0.0 {
        return if x == 0.0 { Cell::Value(0.0) } else { Cell::Undefined };
    }
    Cell::Value((base - x) / base * 100.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    /// Operator id, `None` for the aggregate row.
    pub op: Option<OperatorId>,
    pub bytes: Vec<Cell>,
    pub latency_s: Vec<Cell>,
    pub bytes_reduction_pct: Vec<Cell>,
    pub latency_reduction_pct: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub runs: Vec<String>,
    pub rows: Vec<ComparisonRow>,
    pub aggregate: ComparisonRow,
}

fn row(op: Option<OperatorId>, figs: &[Option<OpFigures>]) -> ComparisonRow {
    let cells = |f: fn(&OpFigures) -> f64| -> Vec<Cell> {
        figs.iter().map(|x| x.as_ref().map_or(Cell::Missing, |x| Cell::of(f(x)))).collect()
    };
    let pct = |f: fn(&OpFigures) -> f64| -> Vec<Cell> {
        figs.iter()
            .map(|x| match (&figs[0], x) {
                (Some(b), Some(x)) => reduction_pct(f(b), f(x)),
                _ => Cell::Missing,
            })
            .collect()
    };
    ComparisonRow {
        op,
        bytes: cells(|x| x.bytes),
        latency_s: cells(|x| x.latency_s),
        bytes_reduction_pct: pct(|x| x.bytes),
        latency_reduction_pct: pct(|x| x.latency_s),
    }
}

/// Compares runs against `runs[0]`. The aggregate row uses each run's
/// total bytes and its mean latency over operators with a finite value.
pub fn compare_runs(runs: &[RunSummary]) -> ComparisonTable {
    let ids: BTreeSet<OperatorId> = runs.iter().flat_map(|r| r.ops.keys().copied()).collect();
    let rows = if runs.is_empty() {
        Vec::new()
    } else {
        ids.iter()
            .map(|id| row(Some(*id), &runs.iter().map(|r| r.ops.get(id).copied()).collect::<Vec<_>>()))
            .collect()
    };
    let agg: Vec<Option<OpFigures>> = runs
        .iter()
        .map(|r| {
            let lat: Vec<f64> = r.ops.values().map(|f| f.latency_s).filter(|l| l.is_finite()).collect();
            Some(OpFigures {
                bytes: r.total_bytes,
                latency_s: if lat.is_empty() {
                    f64::NAN
                } else {
                    lat.iter().sum::<f64>() / lat.len() as f64
                },
            })
        })
        .collect();
    let aggregate = if runs.is_empty() {
        row(None, &[None])
    } else {
        row(None, &agg)
    };
    ComparisonTable {
        runs: runs.iter().map(|r| r.label.clone()).collect(),
        rows,
        aggregate,
    }
}

impl ComparisonTable {
    /// Plain-text table: bytes and byte reductions, then latencies.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:>6}", "op");
        for r in &self.runs {
            let _ = write!(out, " {:>16} {:>9}", format!("{r} bytes"), "red%");
        }
        for r in &self.runs {
            let _ = write!(out, " {:>14}", format!("{r} lat_s"));
        }
        out.push('\n');
        for row in self.rows.iter().chain(std::iter::once(&self.aggregate)) {
            let name = row.op.map_or("total".to_string(), |o| o.to_string());
            let _ = write!(out, "{name:>6}");
            for (b, p) in row.bytes.iter().zip(&row.bytes_reduction_pct) {
                let pct = match p {
                    Cell::Value(v) => format!("{v:.2}"),
                    other => other.text(),
                };
                let bytes = match b {
                    Cell::Value(v) => format!("{v:.0}"),
                    other => other.text(),
                };
                let _ = write!(out, " {bytes:>16} {pct:>9}");
            }
            for l in &row.latency_s {
                let _ = write!(out, " {:>14}", l.text());
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(label: &str, ops: &[(u32, f64, f64)]) -> RunSummary {
        RunSummary {
            label: label.into(),
            ops: ops
                .iter()
                .map(|&(o, b, l)| (OperatorId(o), OpFigures { bytes: b, latency_s: l }))
                .collect(),
            total_bytes: ops.iter().map(|x| x.1).sum(),
        }
    }

    #[test]
    fn percentage_against_first() {
        let t = compare_runs(&[run("co", &[(1, 1000.0, 2.0)]), run("ecs", &[(1, 270.0, 1.0)])]);
        assert_eq!(t.rows[0].bytes_reduction_pct[1], Cell::Value(73.0));
        assert_eq!(t.rows[0].latency_reduction_pct[1], Cell::Value(50.0));
        assert_eq!(t.aggregate.bytes_reduction_pct[1], Cell::Value(73.0));
    }

    #[test]
    fn identical_runs_are_zero() {
        let r = run("a", &[(1, 10.0, 1.0), (2, 0.0, 0.5)]);
        let t = compare_runs(&[r.clone(), r]);
        for row in t.rows.iter().chain([&t.aggregate]) {
            assert!(row.bytes_reduction_pct.iter().all(|c| *c == Cell::Value(0.0)));
            assert!(row.latency_reduction_pct.iter().all(|c| *c == Cell::Value(0.0)));
        }
    }

    #[test]
    fn missing_operator_is_a_gap() {
        let t = compare_runs(&[run("a", &[(1, 10.0, 1.0), (2, 5.0, 1.0)]), run("b", &[(1, 10.0, 1.0)])]);
        assert_eq!(t.rows[1].bytes[1], Cell::Missing);
        assert_eq!(t.rows[1].bytes_reduction_pct[1], Cell::Missing);
        let json = serde_json::to_string(&t.rows[1]).unwrap();
        assert!(json.contains("\"missing\""));
        assert!(t.render().contains("gap"));
    }

    #[test]
    fn zero_baseline() {
        assert_eq!(reduction_pct(0.0, 0.0), Cell::Value(0.0));
        assert_eq!(reduction_pct(0.0, 3.0), Cell::Undefined);
    }
}
