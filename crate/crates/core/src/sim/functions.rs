//! Windowed function registry: direct evaluation, plus partial states and
//! merges for the iteratively computable functions.
//!
//! A window is a set of channels (one per sensor, in operator order) over
//! the same sample positions. Wind functions read channel 0 as x, 1 as y
//! and 2 as z.

use serde::{Deserialize, Serialize};

use crate::model::FunctionKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FnContext {
    pub rate_hz: f64,
    /// Step of the operator in seconds (difference quotients).
    pub step_s: f64,
    /// Samples per gust block.
    pub gust_samples: usize,
    pub disp_baseline: f64,
    /// Samples averaged by the low-pass filter.
    pub filter_len: usize,
}

impl Default for FnContext {
    fn default() -> Self {
        FnContext {
            rate_hz: 10.0,
            step_s: 1.0,
            gust_samples: 10,
            disp_baseline: 0.0,
            filter_len: 5,
        }
    }
}

/// Output of one dependency: its latest window and the one before.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DepValue {
    pub current: Option<Vec<f64>>,
    pub previous: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialState {
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0} has no mergeable partial form")]
pub struct NotIterative(pub &'static str);

/// Whether `f` can be split across edge and cloud without loss.
pub fn is_mergeable(f: FunctionKind) -> bool {
    use FunctionKind::*;
    matches!(
        f,
        Mean | Msqrt | Std | Var | Cov | Speed | Acc | Disp | Trend | Surge | Avgws | Gf | Aoa | Awd
    )
}

pub fn output_arity(f: FunctionKind, channels: usize) -> usize {
    use FunctionKind::*;
    match f {
        Cov | Cc => channels.saturating_sub(1).max(1),
        Avgws | Avgwa | Gf | Fws | Ti | Aoa | Awd => 1,
        _ => channels.max(1),
    }
}

/// Number of values in the partial state of a window.
pub fn state_len(f: FunctionKind, channels: usize, window_samples: usize, gust_samples: usize) -> usize {
    use FunctionKind::*;
    let n = channels.max(1);
    match f {
        Mean | Msqrt | Disp => 2 * n,
        Std | Var => 3 * n,
        Cov => 4 * output_arity(f, channels),
        Trend => 5 * n,
        Surge => 4 * n,
        Avgws => 2,
        Aoa | Awd => 3,
        Gf => 2 * window_samples.div_ceil(gust_samples.max(1)),
        _ => 0,
    }
}

fn ch<'a>(c: &'a [&'a [f64]], k: usize) -> &'a [f64] {
    c.get(k).copied().unwrap_or(&[])
}

fn horizontal(c: &[&[f64]], m: usize) -> f64 {
    let x = ch(c, 0).get(m).copied().unwrap_or(0.0);
    let y = ch(c, 1).get(m).copied().unwrap_or(0.0);
    x.hypot(y)
}

fn window_len(c: &[&[f64]]) -> usize {
    c.first().map_or(0, |x| x.len())
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (n, s) = xs.fold((0usize, 0.0), |(n, s), x| (n + 1, s + x));
    s / n as f64
}

fn pop_var(xs: &[f64]) -> f64 {
    let m = mean(xs.iter().copied());
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

fn pop_cov(a: &[f64], b: &[f64]) -> f64 {
    let ma = mean(a.iter().copied());
    let mb = mean(b.iter().copied());
    a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / a.len() as f64
}

fn pairs(c: &[&[f64]]) -> Vec<(usize, usize)> {
    if c.len() <= 1 {
        vec![(0, 0)]
    } else {
        (1..c.len()).map(|m| (0, m)).collect()
    }
}

fn degrees_0_360(rad: f64) -> f64 {
    let d = rad.to_degrees();
    if d < 0.0 {
        d + 360.0
    } else {
        d
    }
}

fn awd_angle(mx: f64, my: f64) -> f64 {
    if mx == 0.0 {
        if my == 0.0 {
            0.0
        } else {
            90.0f64.copysign(my)
        }
    } else {
        (my / mx).atan().to_degrees()
    }
}

fn difference(deps: &[DepValue], arity: usize, step_s: f64) -> Vec<f64> {
    let Some(d) = deps.first() else {
        return vec![0.0; arity];
    };
    let (Some(cur), Some(prev)) = (&d.current, &d.previous) else {
        return vec![0.0; arity];
    };
    if cur.is_empty() || prev.is_empty() {
        return vec![0.0; arity];
    }
    (0..arity)
        .map(|c| (cur[c % cur.len()] - prev[c % prev.len()]) / step_s)
        .collect()
}

/// Average wind speed from the first dependency, else from the window.
fn avgws_ref(deps: &[DepValue], c: &[&[f64]]) -> f64 {
    deps.first()
        .and_then(|d| d.current.as_ref())
        .and_then(|v| v.first().copied())
        .unwrap_or_else(|| mean((0..window_len(c)).map(|m| horizontal(c, m))))
}

/// Direct evaluation over the whole window.
pub fn eval_function(f: FunctionKind, ctx: &FnContext, c: &[&[f64]], deps: &[DepValue]) -> Vec<f64> {
    use FunctionKind::*;
    let n = window_len(c);
    let per_channel = |g: &dyn Fn(&[f64]) -> f64| -> Vec<f64> { c.iter().map(|x| g(x)).collect() };
    match f {
        Mean => per_channel(&|x| mean(x.iter().copied())),
        Msqrt => per_channel(&|x| mean(x.iter().map(|v| v * v)).sqrt()),
        Max => per_channel(&|x| x.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        Min => per_channel(&|x| x.iter().copied().fold(f64::INFINITY, f64::min)),
        First => per_channel(&|x| x[0]),
        Last => per_channel(&|x| x[x.len() - 1]),
        Range => per_channel(&|x| {
            x.iter().copied().fold(f64::NEG_INFINITY, f64::max) - x.iter().copied().fold(f64::INFINITY, f64::min)
        }),
        Var => per_channel(&pop_var),
        Std => per_channel(&|x| pop_var(x).sqrt()),
        Cov => pairs(c).into_iter().map(|(a, b)| pop_cov(ch(c, a), ch(c, b))).collect(),
        Cc => pairs(c)
            .into_iter()
            .map(|(a, b)| {
                let (xa, xb) = (ch(c, a), ch(c, b));
                let d = (pop_var(xa) * pop_var(xb)).sqrt();
                if d > 0.0 {
                    pop_cov(xa, xb) / d
                } else {
                    0.0
                }
            })
            .collect(),
        Disp => per_channel(&|x| mean(x.iter().map(|v| v - ctx.disp_baseline))),
        Speed | Acc => difference(deps, output_arity(f, c.len()), ctx.step_s),
        Filter => per_channel(&|x| {
            let l = ctx.filter_len.clamp(1, x.len());
            mean(x[x.len() - l..].iter().copied())
        }),
        Trend => per_channel(&|x| {
            let t = |m: usize| m as f64 / ctx.rate_hz;
            let mt = mean((0..x.len()).map(t));
            let mx = mean(x.iter().copied());
            let mut stt = 0.0;
            let mut stx = 0.0;
            for (m, v) in x.iter().enumerate() {
                stt += (t(m) - mt) * (t(m) - mt);
                stx += (t(m) - mt) * (v - mx);
            }
            if stt > 0.0 {
                stx / stt
            } else {
                0.0
            }
        }),
        Surge => per_channel(&|x| {
            let m = mean(x.iter().copied());
            if m != 0.0 {
                x[x.len() - 1] / m
            } else {
                0.0
            }
        }),
        Avgws => vec![mean((0..n).map(|m| horizontal(c, m)))],
        Avgwa => {
            let mx = mean(ch(c, 0).iter().copied());
            let my = mean(ch(c, 1).iter().copied());
            vec![degrees_0_360(my.atan2(mx))]
        }
        Gf => {
            let g = ctx.gust_samples.max(1);
            let mags: Vec<f64> = (0..n).map(|m| horizontal(c, m)).collect();
            let gust = mags
                .chunks(g)
                .map(|b| mean(b.iter().copied()))
                .fold(f64::NEG_INFINITY, f64::max);
            let avg = mean(mags.iter().copied());
            vec![if avg != 0.0 { gust / avg } else { 0.0 }]
        }
        Fws => vec![horizontal(c, n - 1) - avgws_ref(deps, c)],
        Ti => {
            let mags: Vec<f64> = (0..n).map(|m| horizontal(c, m)).collect();
            let r = avgws_ref(deps, c);
            vec![if r != 0.0 { pop_var(&mags).sqrt() / r } else { 0.0 }]
        }
        Aoa => {
            let mz = mean(ch(c, 2).iter().copied());
            let mh = mean((0..n).map(|m| horizontal(c, m)));
            vec![mz.atan2(mh).to_degrees()]
        }
        Awd => {
            let mx = mean(ch(c, 0).iter().copied());
            let my = mean(ch(c, 1).iter().copied());
            vec![awd_angle(mx, my)]
        }
    }
}

/// Chan-style merge of (count, mean, m2) triples.
fn merge_moments(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    let (na, ma, qa) = (a[0], a[1], a[2]);
    let (nb, mb, qb) = (b[0], b[1], b[2]);
    if na == 0.0 {
        return b;
    }
    if nb == 0.0 {
        return a;
    }
    let n = na + nb;
    let d = mb - ma;
    [n, ma + d * nb / n, qa + qb + d * d * na * nb / n]
}

/// Partial state of the samples at relative positions `idx`.
pub fn partial_eval(
    f: FunctionKind,
    ctx: &FnContext,
    c: &[&[f64]],
    idx: &[usize],
) -> Result<PartialState, NotIterative> {
    use FunctionKind::*;
    if !is_mergeable(f) {
        return Err(NotIterative(f.name()));
    }
    let k = idx.len() as f64;
    let mut v = Vec::new();
    match f {
        Mean | Msqrt | Disp => {
            for x in c {
                let s: f64 = idx
                    .iter()
                    .map(|&m| match f {
                        Mean => x[m],
                        Msqrt => x[m] * x[m],
                        _ => x[m] - ctx.disp_baseline,
                    })
                    .sum();
                v.extend([k, s]);
            }
        }
        Std | Var => {
            for x in c {
                let mut st = [0.0; 3];
                for &m in idx {
                    st = merge_moments(st, [1.0, x[m], 0.0]);
                }
                v.extend(st);
            }
        }
        Cov => {
            for (a, b) in pairs(c) {
                let (xa, xb) = (ch(c, a), ch(c, b));
                let mut st = [0.0; 4];
                for &m in idx {
                    st = merge_cov(st, [1.0, xa[m], xb[m], 0.0]);
                }
                v.extend(st);
            }
        }
        Trend => {
            for x in c {
                let mut st = [0.0; 5];
                for &m in idx {
                    st = merge_trend(st, [1.0, m as f64 / ctx.rate_hz, x[m], 0.0, 0.0]);
                }
                v.extend(st);
            }
        }
        Surge => {
            for x in c {
                let s: f64 = idx.iter().map(|&m| x[m]).sum();
                let last = idx.iter().copied().max();
                v.extend([k, s, last.map_or(-1.0, |m| m as f64), last.map_or(0.0, |m| x[m])]);
            }
        }
        Avgws => v.extend([k, idx.iter().map(|&m| horizontal(c, m)).sum()]),
        Aoa => v.extend([
            k,
            idx.iter().map(|&m| ch(c, 2).get(m).copied().unwrap_or(0.0)).sum(),
            idx.iter().map(|&m| horizontal(c, m)).sum(),
        ]),
        Awd => v.extend([
            k,
            idx.iter().map(|&m| ch(c, 0)[m]).sum(),
            idx.iter().map(|&m| ch(c, 1).get(m).copied().unwrap_or(0.0)).sum(),
        ]),
        Gf => {
            let g = ctx.gust_samples.max(1);
            let blocks = window_len(c).div_ceil(g);
            v.resize(2 * blocks, 0.0);
            for &m in idx {
                let b = m / g;
                v[2 * b] += 1.0;
                v[2 * b + 1] += horizontal(c, m);
            }
        }
        Speed | Acc => {}
        _ => unreachable!("guarded by is_mergeable"),
    }
    Ok(PartialState { values: v })
}

fn merge_cov(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    if a[0] == 0.0 {
        return b;
    }
    if b[0] == 0.0 {
        return a;
    }
    let n = a[0] + b[0];
    let dx = b[1] - a[1];
    let dy = b[2] - a[2];
    [
        n,
        a[1] + dx * b[0] / n,
        a[2] + dy * b[0] / n,
        a[3] + b[3] + dx * dy * a[0] * b[0] / n,
    ]
}

fn merge_trend(a: [f64; 5], b: [f64; 5]) -> [f64; 5] {
    if a[0] == 0.0 {
        return b;
    }
    if b[0] == 0.0 {
        return a;
    }
    let n = a[0] + b[0];
    let dt = b[1] - a[1];
    let dx = b[2] - a[2];
    let w = a[0] * b[0] / n;
    [
        n,
        a[1] + dt * b[0] / n,
        a[2] + dx * b[0] / n,
        a[3] + b[3] + dt * dt * w,
        a[4] + b[4] + dt * dx * w,
    ]
}

/// Combines two partial states of the same window.
pub fn combine(f: FunctionKind, a: &PartialState, b: &PartialState) -> PartialState {
    use FunctionKind::*;
    let (x, y) = (&a.values, &b.values);
    let mut v = Vec::with_capacity(x.len());
    match f {
        Std | Var => {
            for (p, q) in x.chunks(3).zip(y.chunks(3)) {
                v.extend(merge_moments([p[0], p[1], p[2]], [q[0], q[1], q[2]]));
            }
        }
        Cov => {
            for (p, q) in x.chunks(4).zip(y.chunks(4)) {
                v.extend(merge_cov([p[0], p[1], p[2], p[3]], [q[0], q[1], q[2], q[3]]));
            }
        }
        Trend => {
            for (p, q) in x.chunks(5).zip(y.chunks(5)) {
                v.extend(merge_trend([p[0], p[1], p[2], p[3], p[4]], [q[0], q[1], q[2], q[3], q[4]]));
            }
        }
        Surge => {
            for (p, q) in x.chunks(4).zip(y.chunks(4)) {
                let (li, lv) = if q[2] > p[2] { (q[2], q[3]) } else { (p[2], p[3]) };
                v.extend([p[0] + q[0], p[1] + q[1], li, lv]);
            }
        }
        _ => v.extend(x.iter().zip(y).map(|(p, q)| p + q)),
    }
    PartialState { values: v }
}

/// Output values from a state covering the whole window.
pub fn finalize(f: FunctionKind, ctx: &FnContext, s: &PartialState, channels: usize, deps: &[DepValue]) -> Vec<f64> {
    use FunctionKind::*;
    let v = &s.values;
    match f {
        Mean | Disp => v.chunks(2).map(|p| p[1] / p[0]).collect(),
        Msqrt => v.chunks(2).map(|p| (p[1] / p[0]).sqrt()).collect(),
        Var => v.chunks(3).map(|p| p[2] / p[0]).collect(),
        Std => v.chunks(3).map(|p| (p[2] / p[0]).sqrt()).collect(),
        Cov => v.chunks(4).map(|p| p[3] / p[0]).collect(),
        Trend => v
            .chunks(5)
            .map(|p| if p[3] > 0.0 { p[4] / p[3] } else { 0.0 })
            .collect(),
        Surge => v
            .chunks(4)
            .map(|p| {
                let m = p[1] / p[0];
                if m != 0.0 {
                    p[3] / m
                } else {
                    0.0
                }
            })
            .collect(),
        Avgws => vec![v[1] / v[0]],
        Aoa => vec![(v[1] / v[0]).atan2(v[2] / v[0]).to_degrees()],
        Awd => vec![awd_angle(v[1] / v[0], v[2] / v[0])],
        Gf => {
            let (mut n, mut s, mut gust) = (0.0, 0.0, f64::NEG_INFINITY);
            for p in v.chunks(2) {
                if p[0] > 0.0 {
                    gust = gust.max(p[1] / p[0]);
                }
                n += p[0];
                s += p[1];
            }
            let avg = s / n;
            vec![if avg != 0.0 { gust / avg } else { 0.0 }]
        }
        Speed | Acc => difference(deps, output_arity(f, channels), ctx.step_s),
        _ => Vec::new(),
    }
}

pub enum CloudPart<'a> {
    Samples(&'a [&'a [f64]], &'a [usize]),
    State(&'a PartialState),
}

/// Completes a window from the edge's partial state and the cloud's part.
pub fn merge(
    f: FunctionKind,
    ctx: &FnContext,
    edge: &PartialState,
    cloud: CloudPart<'_>,
    channels: usize,
    deps: &[DepValue],
) -> Result<Vec<f64>, NotIterative> {
    let other = match cloud {
        CloudPart::Samples(c, idx) => partial_eval(f, ctx, c, idx)?,
        CloudPart::State(s) => s.clone(),
    };
    Ok(finalize(f, ctx, &combine(f, edge, &other), channels, deps))
}
