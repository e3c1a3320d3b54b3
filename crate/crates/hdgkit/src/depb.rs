//! DEPB depth clips: `b"DEPB"`, then little-endian `u32` T, H, W and a reserved zero,
//! then T*H*W little-endian `u16` values, frame-major and row-major within a frame.

use std::fs;
use std::path::Path;

use hdgkit_core::DepthSequence;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"DEPB";
const HEADER_LEN: usize = 20;

pub fn encode(depth: &DepthSequence) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 2 * depth.frames().len());
    out.extend_from_slice(MAGIC);
    for v in [depth.num_frames(), depth.height(), depth.width(), 0] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for &d in depth.frames() {
        out.extend_from_slice(&d.to_le_bytes());
    }
    out
}

/// Parses a DEPB buffer. `origin` only labels errors.
pub fn decode(bytes: &[u8], origin: &Path) -> Result<DepthSequence> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::format(origin, format!("truncated header ({} bytes)", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::format(origin, "bad magic, expected DEPB"));
    }
    let field = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap()) as usize;
    let (t, h, w, reserved) = (field(0), field(1), field(2), field(3));
    if reserved != 0 {
        return Err(Error::format(origin, format!("reserved header field is {reserved}, expected 0")));
    }
    let expected = t
        .checked_mul(h)
        .and_then(|n| n.checked_mul(w))
        .and_then(|n| n.checked_mul(2))
        .ok_or_else(|| Error::format(origin, "header dimensions overflow"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() < expected {
        return Err(Error::format(
            origin,
            format!("truncated payload: header {t}x{h}x{w} needs {expected} bytes, found {}", payload.len()),
        ));
    }
    if payload.len() > expected {
        return Err(Error::format(
            origin,
            format!("size mismatch: header {t}x{h}x{w} needs {expected} bytes, found {}", payload.len()),
        ));
    }
    let values = payload
        .chunks_exact(2)
        .map(|c| u16::from_le_bytes([c[0], c[1]]))
        .collect();
    DepthSequence::new(t, h, w, values).map_err(|e| Error::format(origin, e.to_string()))
}

pub fn read_depb(path: &Path) -> Result<DepthSequence> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes, path)
}

pub fn write_depb(path: &Path, depth: &DepthSequence) -> Result<()> {
    fs::write(path, encode(depth)).map_err(|e| Error::io(path, e))
}
