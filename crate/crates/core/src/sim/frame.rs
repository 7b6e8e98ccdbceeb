//! Uplink frame encoding.
//!
//! Layout, little endian: kind `u8`, operator `u32`, sensor `u32`, window
//! `u32`, payload length in values `u32`, then the payload as `f64`s.

use serde::{Deserialize, Serialize};

pub const HEADER_LEN: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[repr(u8)]
pub enum FrameKind {
    Raw = 0,
    Intermediate = 1,
    Result = 2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub kind: FrameKind,
    /// Zero for raw frames.
    pub op: u32,
    pub sensor: u32,
    pub window: u32,
    pub payload: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrameError {
    #[error("frame truncated: need {need} bytes, have {have}")]
    Truncated { need: usize, have: usize },
    #[error("unknown frame kind {0}")]
    Kind(u8),
}

impl Frame {
    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + 8 * self.payload.len()
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        out.reserve(self.encoded_len());
        out.push(self.kind as u8);
        out.extend_from_slice(&self.op.to_le_bytes());
        out.extend_from_slice(&self.sensor.to_le_bytes());
        out.extend_from_slice(&self.window.to_le_bytes());
        out.extend_from_slice(&(self.payload.len() as u32).to_le_bytes());
        for v in &self.payload {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    /// Decodes one frame from the front of `buf`; returns it and the
    /// number of bytes consumed.
    pub fn decode(buf: &[u8]) -> Result<(Frame, usize), FrameError> {
        if buf.len() < HEADER_LEN {
            return Err(FrameError::Truncated {
                need: HEADER_LEN,
                have: buf.len(),
            });
        }
        let word = |at: usize| u32::from_le_bytes(buf[at..at + 4].try_into().unwrap());
        let kind = match buf[0] {
            0 => FrameKind::Raw,
            1 => FrameKind::Intermediate,
            2 => FrameKind::Result,
            k => return Err(FrameError::Kind(k)),
        };
        let len = word(13) as usize;
        let need = HEADER_LEN + 8 * len;
        if buf.len() < need {
            return Err(FrameError::Truncated { need, have: buf.len() });
        }
        let payload = buf[HEADER_LEN..need]
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
            .collect();
        Ok((
            Frame {
                kind,
                op: word(1),
                sensor: word(5),
                window: word(9),
                payload,
            },
            need,
        ))
    }
}
