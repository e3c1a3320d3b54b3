//! Skeleton text files: one `x y z confidence` line per joint per frame, frames in order,
//! joints in order within a frame. Blank lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hdgkit_core::{Joint, SkeletonSequence};

use crate::error::{Error, Result};

/// Parses skeleton text with `num_joints` joints per frame. Confidences are clamped to
/// `[0, 1]`; nothing else is altered.
pub fn parse_skeleton(text: &str, num_joints: usize, reference_joint: usize, origin: &Path) -> Result<SkeletonSequence> {
    if num_joints == 0 {
        return Err(Error::format(origin, "num_joints must be >= 1"));
    }
    let mut joints = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: i + 1,
            message,
        };
        if fields.len() != 4 {
            return Err(parse_err(format!("expected 4 fields, found {}", fields.len())));
        }
        let mut v = [0.0; 4];
        for (slot, f) in v.iter_mut().zip(&fields) {
            *slot = f
                .parse::<f64>()
                .map_err(|e| parse_err(format!("bad number {f:?}: {e}")))?;
            if !slot.is_finite() {
                return Err(parse_err(format!("non-finite value {f:?}")));
            }
        }
        joints.push(Joint::new(v[0], v[1], v[2], v[3].clamp(0.0, 1.0)));
    }
    if joints.is_empty() {
        return Err(Error::format(origin, "no joint lines"));
    }
    if joints.len() % num_joints != 0 {
        return Err(Error::format(
            origin,
            format!("{} joint lines is not a multiple of {num_joints} joints per frame", joints.len()),
        ));
    }
    let frames = joints.len() / num_joints;
    SkeletonSequence::new(frames, num_joints, reference_joint, joints).map_err(|e| Error::format(origin, e.to_string()))
}

pub fn read_skeleton(path: &Path, num_joints: usize, reference_joint: usize) -> Result<SkeletonSequence> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_skeleton(&text, num_joints, reference_joint, path)
}

/// Shortest round-trip formatting, so reading the text back gives the same values.
pub fn format_skeleton(skel: &SkeletonSequence) -> String {
    let mut out = String::new();
    for j in skel.joints() {
        writeln!(out, "{:?} {:?} {:?} {:?}", j.x, j.y, j.z, j.confidence).unwrap();
    }
    out
}

pub fn write_skeleton(path: &Path, skel: &SkeletonSequence) -> Result<()> {
    fs::write(path, format_skeleton(skel)).map_err(|e| Error::io(path, e))
}
