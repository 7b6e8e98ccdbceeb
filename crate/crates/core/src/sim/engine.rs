//! Discrete-event replay of a workload under an assignment.
//!
//! Each operator window passes through up to three stages: edge compute
//! (FIFO per edge node), uplink (FIFO per node link) and cloud compute
//! (no contention). Stage durations come from the cost model. Sample `m`
//! of sensor `j` is uploaded iff `h(m) < γ_j`, with `h` a golden-ratio
//! sequence, so the cloud part of an operator at ratio `γ_i ≤ γ_j` is the
//! subset `h(m) < γ_i` and the edge keeps the rest. The cloud keeps every
//! raw sample it has received, so overlapping windows upload it once.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};

use super::frame::{Frame, FrameKind, HEADER_LEN};
use super::functions::{self, CloudPart, DepValue, FnContext, PartialState};
use super::trace::Trace;
use crate::costs::{Assignment, CostError, CostModel, CostOrientation, Gammas, Profile};
use crate::feasibility::BOUND_RTOL;
use crate::model::{OperatorId, Schedule, SensorId, Workload};

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Split key of absolute sample index `m`.
pub fn split_key(m: u64) -> f64 {
    ((m + 1) as f64 * GOLDEN).fract()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub cost_orientation: CostOrientation,
    pub gust_s: f64,
    pub disp_baseline: f64,
    pub filter_len: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            cost_orientation: CostOrientation::Corrected,
            gust_s: 1.0,
            disp_baseline: 0.0,
            filter_len: 5,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KindBytes {
    pub frames: u64,
    pub payload_bytes: u64,
    pub frame_bytes: u64,
}

impl KindBytes {
    fn add(&mut self, f: &Frame) {
        self.frames += 1;
        self.payload_bytes += 8 * f.payload.len() as u64;
        self.frame_bytes += f.encoded_len() as u64;
    }

    fn absorb(&mut self, o: &KindBytes) {
        self.frames += o.frames;
        self.payload_bytes += o.payload_bytes;
        self.frame_bytes += o.frame_bytes;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpSimStats {
    pub op: OperatorId,
    pub gamma: f64,
    pub raw: KindBytes,
    pub intermediate: KindBytes,
    pub result: KindBytes,
    pub windows: u64,
    pub outputs: u64,
    pub latency_mean_s: f64,
    pub latency_p50_s: f64,
    pub latency_p95_s: f64,
    pub wait_mean_s: f64,
    pub treq_violations: u64,
    pub last_output: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimTotals {
    pub raw: KindBytes,
    pub intermediate: KindBytes,
    pub result: KindBytes,
    pub payload_bytes: u64,
    pub frame_bytes: u64,
    /// Sum of the encoded lengths of every frame put on a link.
    pub uplink_bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub horizon_s: f64,
    pub sample_rate_hz: f64,
    pub makespan_s: f64,
    pub operators: Vec<OpSimStats>,
    pub totals: SimTotals,
    pub warnings: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error("trace has no samples for sensor {0}")]
    MissingSensor(SensorId),
    #[error("workload has a dependency cycle")]
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Close,
    Start,
    Uplink,
    Cloud,
    Emit,
    Send,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    kind: Kind,
    pos: usize,
    op: usize,
    /// Window index, or emission index for `Emit`/`Send`.
    n: u64,
    /// Window carried by `Send`.
    aux: u64,
}

impl PartialEq for Event {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Event {
    // Reversed for a min-heap.
    fn cmp(&self, o: &Self) -> Ordering {
        o.time
            .total_cmp(&self.time)
            .then(o.kind.cmp(&self.kind))
            .then(o.pos.cmp(&self.pos))
            .then(o.n.cmp(&self.n))
            .then(o.aux.cmp(&self.aux))
    }
}

#[derive(Clone)]
struct WindowOut {
    values: Vec<f64>,
    ready: f64,
}

struct OpState {
    sched: Schedule,
    channels: Vec<usize>,
    results: Vec<Option<WindowOut>>,
    partial: Vec<Option<PartialState>>,
    /// Emission indices waiting for a window's result.
    pending_emits: BTreeMap<u64, Vec<u64>>,
    emitted: Vec<bool>,
    latencies: Vec<f64>,
    waits: Vec<f64>,
    stats: OpSimStats,
    ctx: FnContext,
}

/// Received raw ranges of one sensor: start → (end, arrival time).
type Coverage = BTreeMap<u64, (u64, f64)>;

struct Engine<'a> {
    w: &'a Workload,
    m: CostModel,
    g: Gammas,
    trace: &'a Trace,
    rate: f64,
    horizon: u64,
    pos: Vec<usize>,
    dependents: Vec<Vec<usize>>,
    ops: Vec<OpState>,
    /// Composite windows waiting on dependency results.
    blocked: Vec<(usize, u64)>,
    cpu_free: Vec<f64>,
    link_free: Vec<f64>,
    coverage: Vec<Coverage>,
    cloud_store: Vec<Vec<f64>>,
    sensor_channel: Vec<usize>,
    queue: BinaryHeap<Event>,
    uplink_bytes: u64,
    makespan: f64,
    warnings: Vec<String>,
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

impl<'a> Engine<'a> {
    fn t(&self, sample: u64) -> f64 {
        sample as f64 / self.rate
    }

    fn push(&mut self, time: f64, kind: Kind, op: usize, n: u64, aux: u64) {
        self.queue.push(Event {
            time,
            kind,
            pos: self.pos[op],
            op,
            n,
            aux,
        });
    }

    fn gamma(&self, i: usize) -> f64 {
        self.g.op[i]
    }

    /// Dependency inputs for window `win` of `i`; `None` while some needed
    /// dependency result is still unknown.
    fn dep_inputs(&self, i: usize, win: u64) -> Option<(Vec<DepValue>, f64)> {
        let close = self.ops[i].sched.close(win);
        let mut ready: f64 = 0.0;
        let mut out = Vec::new();
        for &d in &self.m.ops[i].deps {
            let st = &self.ops[d];
            match st.sched.latest_closed(close) {
                None => out.push(DepValue::default()),
                Some(wd) => {
                    let cur = st.results.get(wd as usize)?.as_ref()?;
                    ready = ready.max(cur.ready);
                    let previous = wd
                        .checked_sub(1)
                        .and_then(|p| st.results[p as usize].as_ref())
                        .map(|r| r.values.clone());
                    out.push(DepValue {
                        current: Some(cur.values.clone()),
                        previous,
                    });
                }
            }
        }
        Some((out, ready))
    }

    fn window_channels(&self, i: usize, win: u64) -> Vec<&'a [f64]> {
        let st = &self.ops[i];
        let (s, c) = (st.sched.start(win) as usize, st.sched.close(win) as usize);
        st.channels.iter().map(|&k| &self.trace.samples[k][s..c]).collect()
    }

    fn on_close(&mut self, i: usize, win: u64) {
        match self.dep_inputs(i, win) {
            Some((_, ready)) => {
                let tc = self.t(self.ops[i].sched.close(win));
                let start = tc.max(ready);
                if self.m.ops[i].deps.is_empty() {
                    self.push(start, Kind::Start, i, win, 0);
                } else {
                    self.ops[i].waits.push(start - tc);
                    self.push(start, Kind::Start, i, win, 0);
                }
            }
            None => self.blocked.push((i, win)),
        }
    }

    fn unblock(&mut self, producer: usize, now: f64) {
        let dependents = self.dependents[producer].clone();
        let mut still = Vec::new();
        let blocked = std::mem::take(&mut self.blocked);
        for (i, win) in blocked {
            if !dependents.contains(&i) {
                still.push((i, win));
                continue;
            }
            match self.dep_inputs(i, win) {
                Some((_, ready)) => {
                    let tc = self.t(self.ops[i].sched.close(win));
                    let start = tc.max(ready).max(now);
                    self.ops[i].waits.push(start - tc);
                    self.push(start, Kind::Start, i, win, 0);
                }
                None => still.push((i, win)),
            }
        }
        self.blocked.extend(still);
    }

    fn on_start(&mut self, i: usize, win: u64, now: f64) {
        let gi = self.gamma(i);
        let mut done = now;
        for &k in &self.m.ops[i].nodes.clone() {
            let d = self.m.edge_time_node(i, k, &self.g);
            if d > 0.0 {
                let s = now.max(self.cpu_free[k]);
                self.cpu_free[k] = s + d;
                done = done.max(s + d);
            }
        }
        let op = &self.w.operators[i];
        let (deps, _) = self.dep_inputs(i, win).expect("dependencies resolved before start");
        if gi == 0.0 {
            let ch = self.window_channels(i, win);
            let values = functions::eval_function(op.func, &self.ops[i].ctx, &ch, &deps);
            self.set_result(i, win, values, done);
        } else {
            if gi < 1.0 {
                let st = &self.ops[i];
                let s = st.sched.start(win);
                let ch = self.window_channels(i, win);
                let idx: Vec<usize> = (0..st.sched.window as usize)
                    .filter(|&r| split_key(s + r as u64) >= gi)
                    .collect();
                let p = functions::partial_eval(op.func, &st.ctx, &ch, &idx)
                    .expect("fractional ratios only on mergeable functions");
                self.ops[i].partial[win as usize] = Some(p);
            }
            self.push(done, Kind::Uplink, i, win, 0);
        }
    }

    /// Puts frames on node `k`'s link; returns the arrival time.
    fn transmit(&mut self, k: usize, now: f64, frames: &[Frame]) -> f64 {
        let mut bytes = 0usize;
        let mut buf = Vec::new();
        for f in frames {
            buf.clear();
            f.encode_into(&mut buf);
            bytes += buf.len();
            // The cloud side decodes what was sent.
            let (back, used) = Frame::decode(&buf).expect("frame decodes");
            debug_assert_eq!(used, buf.len());
            debug_assert_eq!(back.payload.len(), f.payload.len());
        }
        self.uplink_bytes += bytes as u64;
        if bytes == 0 {
            return now;
        }
        let s = now.max(self.link_free[k]);
        let arrival = s + bytes as f64 / self.m.nodes[k].bandwidth;
        self.link_free[k] = arrival;
        arrival
    }

    fn on_uplink(&mut self, i: usize, win: u64, now: f64) {
        let gi = self.gamma(i);
        let (s, c) = (self.ops[i].sched.start(win), self.ops[i].sched.close(win));
        let mut ready = now;
        let op_nodes = self.m.ops[i].nodes.clone();
        let home = self.m.ops[i].home;
        for &k in &op_nodes {
            let mut frames = Vec::new();
            let mut claims: Vec<(usize, u64, u64)> = Vec::new();
            for e in self.m.ops[i].entries.iter().filter(|e| e.node == k) {
                let sj = e.sensor;
                let gj = self.g.sensor[sj];
                for (a, b) in gaps(&self.coverage[sj], s, c) {
                    let ch = self.sensor_channel[sj];
                    let payload: Vec<f64> = (a..b)
                        .filter(|&m| split_key(m) < gj)
                        .map(|m| self.trace.samples[ch][m as usize])
                        .collect();
                    claims.push((sj, a, b));
                    if !payload.is_empty() {
                        frames.push(Frame {
                            kind: FrameKind::Raw,
                            op: 0,
                            sensor: self.m.sensors[sj].0,
                            window: win as u32,
                            payload,
                        });
                    }
                }
            }
            if home == Some(k) && gi < 1.0 {
                let state = self.ops[i].partial[win as usize].clone().unwrap_or(PartialState { values: vec![] });
                frames.push(Frame {
                    kind: FrameKind::Intermediate,
                    op: self.m.ops[i].id.0,
                    sensor: 0,
                    window: win as u32,
                    payload: state.values,
                });
            }
            let arrival = self.transmit(k, now, &frames);
            for f in &frames {
                match f.kind {
                    FrameKind::Raw => self.ops[i].stats.raw.add(f),
                    _ => self.ops[i].stats.intermediate.add(f),
                }
            }
            // Store what arrived.
            for &(sj, a, b) in &claims {
                let gj = self.g.sensor[sj];
                let ch = self.sensor_channel[sj];
                for m in a..b {
                    if split_key(m) < gj {
                        self.cloud_store[sj][m as usize] = self.trace.samples[ch][m as usize];
                    }
                }
                self.coverage[sj].insert(a, (b, arrival));
            }
            ready = ready.max(arrival);
        }
        // Raw data uploaded earlier by other operators.
        for e in &self.m.ops[i].entries {
            for (_, arrival) in overlapping(&self.coverage[e.sensor], s, c) {
                ready = ready.max(arrival);
            }
        }
        self.push(ready, Kind::Cloud, i, win, 0);
    }

    fn on_cloud(&mut self, i: usize, win: u64, now: f64) {
        let gi = self.gamma(i);
        let done = now + self.m.cloud_time(i, &self.g).unwrap_or(0.0);
        let st = &self.ops[i];
        let (s, c) = (st.sched.start(win) as usize, st.sched.close(win) as usize);
        let received: Vec<Vec<f64>> = self.m.ops[i]
            .entries
            .iter()
            .map(|e| self.cloud_store[e.sensor][s..c].to_vec())
            .collect();
        let ch: Vec<&[f64]> = received.iter().map(Vec::as_slice).collect();
        let (deps, _) = self.dep_inputs(i, win).expect("dependencies resolved before start");
        let f = self.w.operators[i].func;
        let values = if gi >= 1.0 {
            functions::eval_function(f, &st.ctx, &ch, &deps)
        } else {
            let idx: Vec<usize> = (0..c - s).filter(|&r| split_key((s + r) as u64) < gi).collect();
            let edge = st.partial[win as usize].clone().expect("edge part computed");
            functions::merge(f, &st.ctx, &edge, CloudPart::Samples(&ch, &idx), ch.len(), &deps)
                .expect("fractional ratios only on mergeable functions")
        };
        self.set_result(i, win, values, done);
    }

    fn set_result(&mut self, i: usize, win: u64, values: Vec<f64>, ready: f64) {
        self.makespan = self.makespan.max(ready);
        self.ops[i].results[win as usize] = Some(WindowOut { values, ready });
        if let Some(ms) = self.ops[i].pending_emits.remove(&win) {
            for m in ms {
                self.release_emit(i, m, win, ready);
            }
        }
        self.unblock(i, ready);
    }

    fn release_emit(&mut self, i: usize, m: u64, win: u64, ready: f64) {
        let tick = self.t(m * self.ops[i].sched.freq);
        if self.gamma(i) == 0.0 {
            self.push(tick.max(ready), Kind::Send, i, m, win);
        } else if !self.ops[i].emitted[win as usize] {
            self.ops[i].emitted[win as usize] = true;
            let tc = self.t(self.ops[i].sched.close(win));
            self.ops[i].latencies.push(ready - tc);
        }
    }

    fn on_emit(&mut self, i: usize, m: u64) {
        let st = &mut self.ops[i];
        let Some(win) = st.sched.latest_closed(m * st.sched.freq) else { return };
        st.stats.outputs += 1;
        match &st.results[win as usize] {
            Some(r) => {
                let ready = r.ready;
                self.release_emit(i, m, win, ready);
            }
            None => st.pending_emits.entry(win).or_default().push(m),
        }
    }

    fn on_send(&mut self, i: usize, win: u64, now: f64) {
        let values = self.ops[i].results[win as usize].as_ref().expect("result known").values.clone();
        let frame = Frame {
            kind: FrameKind::Result,
            op: self.m.ops[i].id.0,
            sensor: 0,
            window: win as u32,
            payload: values,
        };
        let k = self.m.ops[i].home.unwrap_or(0);
        let arrival = self.transmit(k, now, std::slice::from_ref(&frame));
        self.ops[i].stats.result.add(&frame);
        self.makespan = self.makespan.max(arrival);
        if !self.ops[i].emitted[win as usize] {
            self.ops[i].emitted[win as usize] = true;
            let tc = self.t(self.ops[i].sched.close(win));
            self.ops[i].latencies.push(arrival - tc);
        }
    }
}

/// Parts of `[s, c)` not yet covered.
fn gaps(cov: &Coverage, s: u64, c: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut cur = s;
    // A range starting before `s` may reach into it.
    if let Some((_, &(b, _))) = cov.range(..s).next_back() {
        cur = cur.max(b);
    }
    for (&a, &(b, _)) in cov.range(s..c) {
        if a > cur {
            out.push((cur, a));
        }
        cur = cur.max(b);
    }
    if cur < c {
        out.push((cur, c));
    }
    out
}

fn overlapping(cov: &Coverage, s: u64, c: u64) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    for (&a, &(b, t)) in cov.range(..c).rev() {
        if b <= s {
            break;
        }
        out.push((a, t));
    }
    out
}

/// Replays `trace` through the workload under assignment `a`.
pub fn run_sim(
    w: &Workload,
    p: &Profile,
    a: &Assignment,
    trace: &Trace,
    cfg: &SimConfig,
) -> Result<SimReport, SimError> {
    let m = CostModel::new(w, p, cfg.cost_orientation)?;
    let g = m.gammas(w, a)?;
    for (i, op) in w.operators.iter().enumerate() {
        if g.op_value(i).is_none() {
            return Err(SimError::Cost(CostError::UnequalSensorGamma(op.id)));
        }
    }
    let order = crate::model::topological_order(w).map_err(|_| SimError::Cyclic)?;
    let index = w.index();
    let mut pos = vec![0; w.operators.len()];
    for (p_, id) in order.iter().enumerate() {
        pos[index[id]] = p_;
    }
    let rate = trace.sample_rate_hz;
    let horizon = trace.len() as u64;

    let mut sensor_channel = Vec::with_capacity(m.sensors.len());
    for s in &m.sensors {
        match trace.sensors.iter().position(|x| x == s) {
            Some(k) => sensor_channel.push(k),
            None if m.readers[sensor_channel.len()].is_empty() => sensor_channel.push(usize::MAX),
            None => return Err(SimError::MissingSensor(*s)),
        }
    }

    let mut dependents = vec![Vec::new(); w.operators.len()];
    for (i, o) in m.ops.iter().enumerate() {
        for &d in &o.deps {
            dependents[d].push(i);
        }
    }

    let mut warnings = Vec::new();
    let ops: Vec<OpState> = w
        .operators
        .iter()
        .enumerate()
        .map(|(i, op)| {
            let sched = Schedule::new(op, rate);
            let windows = sched.windows_within(horizon);
            if windows == 0 {
                warnings.push(format!(
                    "operator {}: window of {} s exceeds the {} s horizon, no outputs",
                    op.id,
                    op.window_s,
                    horizon as f64 / rate
                ));
            }
            OpState {
                sched,
                channels: m.ops[i].entries.iter().map(|e| sensor_channel[e.sensor]).collect(),
                results: vec![None; windows as usize],
                partial: vec![None; windows as usize],
                pending_emits: BTreeMap::new(),
                emitted: vec![false; windows as usize],
                latencies: Vec::new(),
                waits: Vec::new(),
                ctx: FnContext {
                    rate_hz: rate,
                    step_s: op.step_s,
                    gust_samples: ((cfg.gust_s * rate).round() as usize).max(1),
                    disp_baseline: cfg.disp_baseline,
                    filter_len: cfg.filter_len,
                },
                stats: OpSimStats {
                    op: op.id,
                    gamma: g.op[i],
                    raw: KindBytes::default(),
                    intermediate: KindBytes::default(),
                    result: KindBytes::default(),
                    windows,
                    outputs: 0,
                    latency_mean_s: f64::NAN,
                    latency_p50_s: f64::NAN,
                    latency_p95_s: f64::NAN,
                    wait_mean_s: 0.0,
                    treq_violations: 0,
                    last_output: Vec::new(),
                },
            }
        })
        .collect();

    let n_nodes = m.node_count();
    let n_sensors = m.sensors.len();
    let mut e = Engine {
        w,
        trace,
        rate,
        horizon,
        pos,
        dependents,
        ops,
        blocked: Vec::new(),
        cpu_free: vec![0.0; n_nodes],
        link_free: vec![0.0; n_nodes],
        coverage: vec![Coverage::new(); n_sensors],
        cloud_store: vec![vec![f64::NAN; horizon as usize]; n_sensors],
        sensor_channel,
        queue: BinaryHeap::new(),
        uplink_bytes: 0,
        makespan: 0.0,
        warnings,
        m,
        g,
    };

    for i in 0..w.operators.len() {
        let sched = e.ops[i].sched;
        for win in 0..sched.windows_within(e.horizon) {
            let t = e.t(sched.close(win));
            e.push(t, Kind::Close, i, win, 0);
        }
        let first = (sched.window.saturating_sub(1)) / sched.freq + 1;
        let mut mi = first;
        while mi * sched.freq <= e.horizon {
            let t = e.t(mi * sched.freq);
            e.push(t, Kind::Emit, i, mi, 0);
            mi += 1;
        }
    }

    while let Some(ev) = e.queue.pop() {
        match ev.kind {
            Kind::Close => e.on_close(ev.op, ev.n),
            Kind::Start => e.on_start(ev.op, ev.n, ev.time),
            Kind::Uplink => e.on_uplink(ev.op, ev.n, ev.time),
            Kind::Cloud => e.on_cloud(ev.op, ev.n, ev.time),
            Kind::Emit => e.on_emit(ev.op, ev.n),
            Kind::Send => e.on_send(ev.op, ev.aux, ev.time),
        }
    }

    let mut totals = SimTotals {
        uplink_bytes: e.uplink_bytes,
        ..SimTotals::default()
    };
    let mut operators = Vec::with_capacity(e.ops.len());
    for (i, st) in e.ops.iter_mut().enumerate() {
        let mut lat = st.latencies.clone();
        lat.sort_by(f64::total_cmp);
        let req = w.operators[i].t_req_s;
        let mut s = st.stats.clone();
        if !lat.is_empty() {
            s.latency_mean_s = lat.iter().sum::<f64>() / lat.len() as f64;
            s.latency_p50_s = percentile(&lat, 0.5);
            s.latency_p95_s = percentile(&lat, 0.95);
        }
        s.treq_violations = lat.iter().filter(|&&l| l > req * (1.0 + BOUND_RTOL)).count() as u64;
        if !st.waits.is_empty() {
            s.wait_mean_s = st.waits.iter().sum::<f64>() / st.waits.len() as f64;
        }
        s.last_output = st
            .results
            .iter()
            .rev()
            .find_map(|r| r.as_ref().map(|r| r.values.clone()))
            .unwrap_or_default();
        totals.raw.absorb(&s.raw);
        totals.intermediate.absorb(&s.intermediate);
        totals.result.absorb(&s.result);
        operators.push(s);
    }
    totals.payload_bytes = totals.raw.payload_bytes + totals.intermediate.payload_bytes + totals.result.payload_bytes;
    totals.frame_bytes = totals.raw.frame_bytes + totals.intermediate.frame_bytes + totals.result.frame_bytes;
    debug_assert_eq!(
        totals.frame_bytes,
        totals.payload_bytes + HEADER_LEN as u64 * (totals.raw.frames + totals.intermediate.frames + totals.result.frames)
    );
    Ok(SimReport {
        horizon_s: horizon as f64 / rate,
        sample_rate_hz: rate,
        makespan_s: e.makespan,
        operators,
        totals,
        warnings: e.warnings,
    })
}
