//! Deterministic synthetic action datasets.
//!
//! Each class is a parametric whole-body motion on a 20-joint stick figure (wave, squat,
//! punch, walk, ...). Subjects scale the body and change the execution speed, repetitions
//! jitter amplitude and phase, and each view is a fixed yaw about the vertical axis.
//! Depth frames are rendered orthographically by splatting a Gaussian-profiled blob at
//! every joint, nearest depth winning per pixel, then adding Gaussian depth noise.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{DatasetManifest, ManifestEntry};
use crate::error::{Error, Result};
use crate::model::{ActionSample, DepthSequence, Joint, SkeletonSequence};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SynthSpec {
    pub num_classes: usize,
    pub num_subjects: usize,
    pub num_views: usize,
    pub reps_per_cell: usize,
    pub frame_height: usize,
    pub frame_width: usize,
    pub num_frames: usize,
    pub num_joints: usize,
    /// Standard deviation of the per-pixel depth noise, millimetres.
    pub noise_level: f64,
    /// Standard deviation of per-joint position noise, metres (applied in body space).
    pub skeleton_noise: f64,
    pub rng_seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            num_classes: 6,
            num_subjects: 8,
            num_views: 4,
            reps_per_cell: 1,
            frame_height: 48,
            frame_width: 64,
            num_frames: 20,
            num_joints: 20,
            noise_level: 5.0,
            skeleton_noise: 0.0,
            rng_seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("num_classes", self.num_classes),
            ("num_subjects", self.num_subjects),
            ("num_views", self.num_views),
            ("reps_per_cell", self.reps_per_cell),
            ("frame_height", self.frame_height),
            ("frame_width", self.frame_width),
            ("num_frames", self.num_frames),
            ("num_joints", self.num_joints),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidConfig(alloc::format!("{name} must be >= 1")));
        }
        for (name, v) in [("noise_level", self.noise_level), ("skeleton_noise", self.skeleton_noise)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidConfig(alloc::format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if self.frame_height > u16::MAX as usize || self.frame_width > u16::MAX as usize {
            return Err(Error::InvalidConfig("frame size too large".into()));
        }
        Ok(())
    }

    pub fn num_samples(&self) -> usize {
        self.num_classes * self.num_subjects * self.num_views * self.reps_per_cell
    }

    /// Index of the reference (spine) joint.
    pub fn reference_joint(&self) -> usize {
        if self.num_joints >= 2 {
            1
        } else {
            0
        }
    }
}

/// `p -> R p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rotation: [[f64; 3]; 3],
    pub translation: [f64; 3],
}

impl RigidTransform {
    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        let r = &self.rotation;
        [0, 1, 2].map(|i| r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2] + self.translation[i])
    }

    pub fn apply_inverse(&self, q: [f64; 3]) -> [f64; 3] {
        let d = [0, 1, 2].map(|i| q[i] - self.translation[i]);
        let r = &self.rotation;
        [0, 1, 2].map(|i| r[0][i] * d[0] + r[1][i] * d[1] + r[2][i] * d[2])
    }
}

/// Yaw between consecutive views.
pub const VIEW_STEP_DEGREES: f64 = 30.0;
/// Distance from the camera to the body's vertical axis, metres.
pub const CAMERA_DISTANCE: f64 = 3.0;
const BODY_CENTER_HEIGHT: f64 = 0.85;
const BLOB_RADIUS: f64 = 0.09;

/// Body-to-camera transform of a view: a yaw about the vertical axis, then a shift that
/// centres the body in front of the camera.
pub fn view_transform(view: usize) -> RigidTransform {
    let yaw = view as f64 * VIEW_STEP_DEGREES * PI / 180.0;
    let (s, c) = (libm::sin(yaw), libm::cos(yaw));
    RigidTransform {
        rotation: [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]],
        translation: [0.0, -BODY_CENTER_HEIGHT, CAMERA_DISTANCE],
    }
}

/// Rest pose of the 20-joint template, metres: x right, y up, z away from the camera.
const REST_POSE: [[f64; 3]; 20] = [
    [0.0, 0.95, 0.0],    // hip centre
    [0.0, 1.20, 0.0],    // spine
    [0.0, 1.45, 0.0],    // shoulder centre
    [0.0, 1.65, 0.0],    // head
    [-0.20, 1.42, 0.0],  // left shoulder
    [-0.25, 1.15, 0.0],  // left elbow
    [-0.27, 0.90, 0.0],  // left wrist
    [-0.28, 0.82, 0.0],  // left hand
    [0.20, 1.42, 0.0],   // right shoulder
    [0.25, 1.15, 0.0],   // right elbow
    [0.27, 0.90, 0.0],   // right wrist
    [0.28, 0.82, 0.0],   // right hand
    [-0.10, 0.90, 0.0],  // left hip
    [-0.11, 0.50, 0.0],  // left knee
    [-0.12, 0.10, 0.0],  // left ankle
    [-0.12, 0.05, -0.10], // left foot
    [0.10, 0.90, 0.0],   // right hip
    [0.11, 0.50, 0.0],   // right knee
    [0.12, 0.10, 0.0],   // right ankle
    [0.12, 0.05, -0.10], // right foot
];

const LEFT_ARM: [usize; 3] = [5, 6, 7];
const RIGHT_ARM: [usize; 3] = [9, 10, 11];
const LEFT_LEG: [usize; 3] = [13, 14, 15];
const RIGHT_LEG: [usize; 3] = [17, 18, 19];
const CHAIN: [f64; 3] = [0.5, 0.9, 1.0];

/// Names of the motion primitives; class `c` uses primitive `c % 10` at frequency
/// multiplier `1 + c / 10`.
pub const MOTION_NAMES: [&str; 10] = [
    "wave", "squat", "punch", "walk", "wave-left", "bend", "jump", "raise-arms", "kick", "side-step",
];

fn bump(s: f64) -> f64 {
    let v = libm::sin(PI * s);
    v * v
}

/// Body-space pose of the 20 template joints for a class at action phase `s`.
fn template_pose(class: usize, s: f64, amp: f64) -> [[f64; 3]; 20] {
    let mut p = REST_POSE;
    let freq = 1.0 + (class / MOTION_NAMES.len()) as f64;
    let s = s * freq;
    let w = 2.0 * PI * s;
    let add = |p: &mut [[f64; 3]; 20], j: usize, d: [f64; 3]| {
        for a in 0..3 {
            p[j][a] += amp * d[a];
        }
    };
    match class % MOTION_NAMES.len() {
        0 => {
            for (&j, k) in RIGHT_ARM.iter().zip(CHAIN) {
                add(&mut p, j, [0.18 * k * libm::sin(3.0 * w), 0.55 * k * bump(s), 0.0]);
            }
        }
        1 => {
            let b = bump(s);
            for j in 0..12 {
                add(&mut p, j, [0.0, -0.35 * b, 0.0]);
            }
            for j in [12, 16] {
                add(&mut p, j, [0.0, -0.35 * b, 0.1 * b]);
            }
            for j in [13, 17] {
                add(&mut p, j, [0.0, -0.15 * b, -0.25 * b]);
            }
        }
        2 => {
            let push = libm::fmax(0.0, libm::sin(2.0 * w));
            for (&j, k) in RIGHT_ARM.iter().zip(CHAIN) {
                add(&mut p, j, [-0.1 * k * push, 0.3 * k, -0.5 * k * push]);
            }
        }
        3 => {
            let g = libm::sin(2.0 * w);
            for j in 0..20 {
                add(&mut p, j, [0.5 * (s - 0.5), 0.0, 0.0]);
            }
            for ((&l, &r), k) in LEFT_LEG.iter().zip(&RIGHT_LEG).zip(CHAIN) {
                add(&mut p, l, [0.0, 0.05 * k * libm::fmax(0.0, g), -0.3 * k * g]);
                add(&mut p, r, [0.0, 0.05 * k * libm::fmax(0.0, -g), 0.3 * k * g]);
            }
            for ((&l, &r), k) in LEFT_ARM.iter().zip(&RIGHT_ARM).zip(CHAIN) {
                add(&mut p, l, [0.0, 0.0, 0.2 * k * g]);
                add(&mut p, r, [0.0, 0.0, -0.2 * k * g]);
            }
        }
        4 => {
            for (&j, k) in LEFT_ARM.iter().zip(CHAIN) {
                add(&mut p, j, [-0.18 * k * libm::sin(3.0 * w), 0.55 * k * bump(s), 0.0]);
            }
        }
        5 => {
            let b = bump(s);
            for j in 1..12 {
                let h = ((REST_POSE[j][1] - 0.95) / 0.7).clamp(0.0, 1.0);
                add(&mut p, j, [0.0, -0.3 * h * b, -0.55 * h * b]);
            }
        }
        6 => {
            let lift = libm::fmax(0.0, libm::sin(2.0 * w));
            for j in 0..20 {
                add(&mut p, j, [0.0, 0.3 * lift, 0.0]);
            }
            for (&j, k) in LEFT_ARM.iter().chain(&RIGHT_ARM).zip(CHAIN.iter().chain(&CHAIN)) {
                add(&mut p, j, [0.0, 0.25 * k * lift, 0.0]);
            }
        }
        7 => {
            let b = bump(s);
            for ((&l, &r), k) in LEFT_ARM.iter().zip(&RIGHT_ARM).zip(CHAIN) {
                add(&mut p, l, [-0.12 * k * b, 0.65 * k * b, 0.0]);
                add(&mut p, r, [0.12 * k * b, 0.65 * k * b, 0.0]);
            }
        }
        8 => {
            let b = bump(s);
            for (&j, k) in RIGHT_LEG.iter().zip(CHAIN) {
                add(&mut p, j, [0.0, 0.3 * k * b, -0.55 * k * b]);
            }
        }
        _ => {
            let shift = 0.3 * libm::sin(w);
            let spread = 0.12 * libm::fabs(libm::sin(2.0 * w));
            for j in 0..20 {
                add(&mut p, j, [shift, 0.0, 0.0]);
            }
            for ((&l, &r), k) in LEFT_LEG.iter().zip(&RIGHT_LEG).zip(CHAIN) {
                add(&mut p, l, [-spread * k, 0.0, 0.0]);
                add(&mut p, r, [spread * k, 0.0, 0.0]);
            }
        }
    }
    p
}

/// Expands or truncates the 20-joint template to `num_joints`. Extra joints sit midway
/// between consecutive template joints.
fn fit_joints(pose: &[[f64; 3]; 20], num_joints: usize) -> Vec<[f64; 3]> {
    (0..num_joints)
        .map(|j| {
            if j < 20 {
                pose[j]
            } else {
                let a = (j - 20) % 19;
                [0, 1, 2].map(|i| 0.5 * (pose[a][i] + pose[a + 1][i]))
            }
        })
        .collect()
}

fn stream(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    // splitmix64 over the parts
    let mut h = seed;
    for &p in parts {
        h = h.wrapping_add(p).wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    ChaCha8Rng::seed_from_u64(h)
}

struct SubjectStyle {
    scale: f64,
    speed: f64,
}

struct RepStyle {
    amp: f64,
    phase: f64,
}

fn subject_style(spec: &SynthSpec, subject: usize) -> SubjectStyle {
    let mut rng = stream(spec.rng_seed, &[1, subject as u64]);
    SubjectStyle {
        scale: rng.random_range(0.85..1.15),
        speed: rng.random_range(0.8..1.2),
    }
}

/// Body-space joint trajectory (`T x J`, frame-major) for one (class, subject, rep).
/// Views share it, so it never depends on the view.
fn body_trajectory(spec: &SynthSpec, class: usize, subject: usize, rep: usize) -> Vec<[f64; 3]> {
    let style = subject_style(spec, subject);
    let mut rng = stream(spec.rng_seed, &[2, class as u64, subject as u64, rep as u64]);
    let rep_style = RepStyle {
        amp: rng.random_range(0.9..1.1),
        phase: rng.random_range(-0.05..0.05),
    };
    let noise = Normal::new(0.0, spec.skeleton_noise).expect("validated noise level");
    let t_len = spec.num_frames;
    let mut out = Vec::with_capacity(t_len * spec.num_joints);
    for t in 0..t_len {
        let progress = if t_len > 1 {
            t as f64 / (t_len - 1) as f64
        } else {
            0.0
        };
        let s = (style.speed * progress + rep_style.phase).clamp(0.0, 1.0);
        let pose = template_pose(class, s, rep_style.amp);
        for p in fit_joints(&pose, spec.num_joints) {
            let mut q = p.map(|v| v * style.scale);
            if spec.skeleton_noise > 0.0 {
                for v in &mut q {
                    *v += noise.sample(&mut rng);
                }
            }
            out.push(q);
        }
    }
    out
}

fn render_depth(
    spec: &SynthSpec,
    camera_joints: &[[f64; 3]],
    body_scale: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<u16> {
    let (h, w) = (spec.frame_height, spec.frame_width);
    let px_per_m = h as f64 / 2.2;
    let radius_m = BLOB_RADIUS * body_scale;
    let r_px = libm::fmax(radius_m * px_per_m, 0.75);
    let sigma2 = 2.0 * (r_px / 2.0) * (r_px / 2.0);
    let noise = Normal::new(0.0, spec.noise_level).expect("validated noise level");
    let mut frames = vec![0u16; spec.num_frames * h * w];
    for (t, frame) in frames.chunks_mut(h * w).enumerate() {
        let mut best = vec![f64::INFINITY; h * w];
        for q in &camera_joints[t * spec.num_joints..(t + 1) * spec.num_joints] {
            let cu = w as f64 / 2.0 + q[0] * px_per_m;
            let cv = h as f64 / 2.0 - q[1] * px_per_m;
            let u0 = libm::floor(cu - r_px).max(0.0) as usize;
            let v0 = libm::floor(cv - r_px).max(0.0) as usize;
            let u1 = (libm::ceil(cu + r_px).max(0.0) as usize).min(w);
            let v1 = (libm::ceil(cv + r_px).max(0.0) as usize).min(h);
            for v in v0..v1 {
                for u in u0..u1 {
                    let du = u as f64 + 0.5 - cu;
                    let dv = v as f64 + 0.5 - cv;
                    let d2 = du * du + dv * dv;
                    if d2 > r_px * r_px {
                        continue;
                    }
                    let z = q[2] - radius_m * libm::exp(-d2 / sigma2);
                    let cell = &mut best[v * w + u];
                    if z < *cell {
                        *cell = z;
                    }
                }
            }
        }
        for (px, &z) in frame.iter_mut().zip(&best) {
            if z.is_finite() {
                let mut mm = z * 1000.0;
                if spec.noise_level > 0.0 {
                    mm += noise.sample(rng);
                }
                *px = libm::round(mm).clamp(1.0, u16::MAX as f64) as u16;
            }
        }
    }
    frames
}

/// Builds `classes x subjects x views x reps` samples, nested in that order, plus a
/// manifest pointing at `depth/<id>.depb` and `skeleton/<id>.txt`.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<(DatasetManifest, Vec<ActionSample>)> {
    spec.validate()?;
    let mut entries = Vec::with_capacity(spec.num_samples());
    let mut samples = Vec::with_capacity(spec.num_samples());
    for class in 0..spec.num_classes {
        for subject in 0..spec.num_subjects {
            let scale = subject_style(spec, subject).scale;
            let bodies: Vec<Vec<[f64; 3]>> = (0..spec.reps_per_cell)
                .map(|rep| body_trajectory(spec, class, subject, rep))
                .collect();
            for view in 0..spec.num_views {
                let xf = view_transform(view);
                for (rep, body) in bodies.iter().enumerate() {
                    let cam: Vec<[f64; 3]> = body.iter().map(|&p| xf.apply(p)).collect();
                    let mut rng = stream(
                        spec.rng_seed,
                        &[3, class as u64, subject as u64, view as u64, rep as u64],
                    );
                    let depth = DepthSequence::new(
                        spec.num_frames,
                        spec.frame_height,
                        spec.frame_width,
                        render_depth(spec, &cam, scale, &mut rng),
                    )?;
                    let joints = cam.iter().map(|q| Joint::new(q[0], q[1], q[2], 1.0)).collect();
                    let skeleton = SkeletonSequence::new(
                        spec.num_frames,
                        spec.num_joints,
                        spec.reference_joint(),
                        joints,
                    )?;
                    let id = sample_id(class, subject, view, rep);
                    entries.push(ManifestEntry {
                        sample_id: id.clone(),
                        class_label: class,
                        subject_id: subject,
                        view_id: view,
                        depth_path: alloc::format!("depth/{id}.depb"),
                        skeleton_path: alloc::format!("skeleton/{id}.txt"),
                    });
                    samples.push(ActionSample::new(
                        id,
                        class,
                        subject,
                        view,
                        Some(depth),
                        Some(skeleton),
                    )?);
                }
            }
        }
    }
    let manifest = DatasetManifest {
        name: alloc::format!("synthetic-seed{}", spec.rng_seed),
        num_classes: spec.num_classes,
        num_subjects: spec.num_subjects,
        num_views: spec.num_views,
        num_joints: spec.num_joints,
        reference_joint: spec.reference_joint(),
        samples: entries,
    };
    manifest.validate()?;
    Ok((manifest, samples))
}

pub fn sample_id(class: usize, subject: usize, view: usize, rep: usize) -> String {
    alloc::format!("a{class:02}_s{subject:02}_v{view}_r{rep}")
}
