//! Synthetic sensor streams and their binary file form.
//!
//! File layout, little endian: sensor count `u32`, rate `f64`, duration
//! `f64`, the sensor ids as `u32`s, then each sensor's samples as
//! contiguous `f64`s.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::SensorId;

/// `offset + amplitude·sin(2π·freq·t + phase) + U(-noise, noise)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub freq_hz: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub noise: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamConfig {
    pub duration_s: f64,
    pub sample_rate_hz: f64,
    pub seed: u64,
    /// Explicit signals; other sensors get seed-derived parameters.
    #[serde(default)]
    pub signals: BTreeMap<SensorId, SignalSpec>,
}

impl Default for StreamConfig {
    fn default() -> Self {
        StreamConfig {
            duration_s: 3600.0,
            sample_rate_hz: 10.0,
            seed: 0,
            signals: BTreeMap::new(),
        }
    }
}

impl StreamConfig {
    pub fn samples(&self) -> usize {
        (self.duration_s * self.sample_rate_hz).round().max(0.0) as usize
    }

    fn rng(&self, s: SensorId) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(s.0) + 1);
        rng
    }

    /// Signal of sensor `s`, explicit or drawn from the seed.
    pub fn signal(&self, s: SensorId) -> SignalSpec {
        if let Some(sig) = self.signals.get(&s) {
            return *sig;
        }
        let mut rng = self.rng(s);
        SignalSpec {
            freq_hz: 1.0 / rng.gen_range(20.0..600.0),
            amplitude: rng.gen_range(0.5..3.0),
            offset: rng.gen_range(2.0..12.0),
            noise: rng.gen_range(0.05..0.4),
            phase: rng.gen_range(0.0..std::f64::consts::TAU),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    pub sensors: Vec<SensorId>,
    pub samples: Vec<Vec<f64>>,
}

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error("trace file truncated")]
    Truncated,
    #[error("trace file has {0} trailing bytes")]
    Trailing(usize),
}

impl Trace {
    pub fn channel(&self, s: SensorId) -> Option<&[f64]> {
        self.sensors
            .iter()
            .position(|&x| x == s)
            .map(|i| self.samples[i].as_slice())
    }

    pub fn len(&self) -> usize {
        self.samples.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(20 + 4 * self.sensors.len() + 8 * self.len() * self.sensors.len());
        out.extend_from_slice(&(self.sensors.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.sample_rate_hz.to_le_bytes());
        out.extend_from_slice(&self.duration_s.to_le_bytes());
        for s in &self.sensors {
            out.extend_from_slice(&s.0.to_le_bytes());
        }
        for ch in &self.samples {
            for v in ch {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(b: &[u8]) -> Result<Trace, TraceError> {
        let take = |at: usize, n: usize| b.get(at..at + n).ok_or(TraceError::Truncated);
        let count = u32::from_le_bytes(take(0, 4)?.try_into().unwrap()) as usize;
        let rate = f64::from_le_bytes(take(4, 8)?.try_into().unwrap());
        let duration = f64::from_le_bytes(take(12, 8)?.try_into().unwrap());
        let n = (duration * rate).round().max(0.0) as usize;
        let mut at = 20;
        let mut sensors = Vec::with_capacity(count);
        for _ in 0..count {
            sensors.push(SensorId(u32::from_le_bytes(take(at, 4)?.try_into().unwrap())));
            at += 4;
        }
        let mut samples = Vec::with_capacity(count);
        for _ in 0..count {
            let raw = take(at, 8 * n)?;
            samples.push(
                raw.chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            );
            at += 8 * n;
        }
        if at != b.len() {
            return Err(TraceError::Trailing(b.len() - at));
        }
        Ok(Trace {
            sample_rate_hz: rate,
            duration_s: duration,
            sensors,
            samples,
        })
    }
}

/// Deterministic samples for `sensors`, in ascending id order.
pub fn generate_trace(cfg: &StreamConfig, sensors: impl IntoIterator<Item = SensorId>) -> Trace {
    let mut ids: Vec<SensorId> = sensors.into_iter().collect();
    ids.sort_unstable();
    ids.dedup();
    let n = cfg.samples();
    let samples = ids
        .iter()
        .map(|&s| {
            let sig = cfg.signal(s);
            let mut rng = cfg.rng(s);
            // Skip the draws used for the parameters.
            for _ in 0..5 {
                let _: f64 = rng.gen();
            }
            (0..n)
                .map(|m| {
                    let t = m as f64 / cfg.sample_rate_hz;
                    let noise = if sig.noise > 0.0 {
                        rng.gen_range(-sig.noise..=sig.noise)
                    } else {
                        0.0
                    };
                    sig.offset + sig.amplitude * (std::f64::consts::TAU * sig.freq_hz * t + sig.phase).sin() + noise
                })
                .collect()
        })
        .collect();
    Trace {
        sample_rate_hz: cfg.sample_rate_hz,
        duration_s: cfg.duration_s,
        sensors: ids,
        samples,
    }
}
