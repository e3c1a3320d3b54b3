//! Domain types shared by feature extraction, training and evaluation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A `T x H x W` depth clip in millimetres. Zero marks an invalid or background sample.
///
/// Values are stored frame-major, row-major within a frame.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DepthSequence {
    num_frames: usize,
    height: usize,
    width: usize,
    frames: Vec<u16>,
    mask: Option<Vec<bool>>,
}

impl DepthSequence {
    pub fn new(num_frames: usize, height: usize, width: usize, frames: Vec<u16>) -> Result<Self> {
        if num_frames == 0 || height == 0 || width == 0 {
            return Err(Error::InvalidSequence(alloc::format!(
                "depth dimensions must be positive, got {num_frames}x{height}x{width}"
            )));
        }
        let expected = num_frames * height * width;
        if frames.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: frames.len(),
            });
        }
        Ok(Self {
            num_frames,
            height,
            width,
            frames,
            mask: None,
        })
    }

    /// Attaches a foreground mask; `false` entries are excluded from every histogram.
    pub fn with_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.frames.len() {
            return Err(Error::ShapeMismatch {
                expected: self.frames.len(),
                actual: mask.len(),
            });
        }
        self.mask = Some(mask);
        Ok(self)
    }

    pub fn num_frames(&self) -> usize {
        self.num_frames
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn frames(&self) -> &[u16] {
        &self.frames
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    #[inline]
    pub fn index(&self, t: usize, y: usize, x: usize) -> usize {
        (t * self.height + y) * self.width + x
    }

    #[inline]
    pub fn get(&self, t: usize, y: usize, x: usize) -> u16 {
        self.frames[self.index(t, y, x)]
    }

    /// A voxel is foreground when its depth is positive and the mask (if any) keeps it.
    #[inline]
    pub fn is_foreground_at(&self, idx: usize) -> bool {
        self.frames[idx] > 0 && self.mask.as_ref().is_none_or(|m| m[idx])
    }
}

/// One tracked joint: camera-space position and tracker confidence in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Joint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub confidence: f64,
}

impl Joint {
    pub fn new(x: f64, y: f64, z: f64, confidence: f64) -> Self {
        Self {
            x,
            y,
            z,
            confidence,
        }
    }

    #[inline]
    pub fn coord(&self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }
}

/// Per-frame joint positions, `T x J`, frame-major.
///
/// Low-confidence joints are kept as they are; nothing is dropped.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SkeletonSequence {
    num_frames: usize,
    num_joints: usize,
    reference_joint: usize,
    joints: Vec<Joint>,
}

impl SkeletonSequence {
    pub fn new(
        num_frames: usize,
        num_joints: usize,
        reference_joint: usize,
        joints: Vec<Joint>,
    ) -> Result<Self> {
        if num_frames == 0 || num_joints == 0 {
            return Err(Error::InvalidSequence(alloc::format!(
                "skeleton needs at least one frame and one joint, got {num_frames}x{num_joints}"
            )));
        }
        if reference_joint >= num_joints {
            return Err(Error::InvalidSequence(alloc::format!(
                "reference joint {reference_joint} out of range for {num_joints} joints"
            )));
        }
        if joints.len() != num_frames * num_joints {
            return Err(Error::ShapeMismatch {
                expected: num_frames * num_joints,
                actual: joints.len(),
            });
        }
        if let Some(i) = joints
            .iter()
            .position(|j| !(j.x.is_finite() && j.y.is_finite() && j.z.is_finite()))
        {
            return Err(Error::InvalidSequence(alloc::format!(
                "non-finite coordinate at frame {}, joint {}",
                i / num_joints,
                i % num_joints
            )));
        }
        Ok(Self {
            num_frames,
            num_joints,
            reference_joint,
            joints,
        })
    }

    pub fn num_frames(&self) -> usize {
        self.num_frames
    }

    pub fn num_joints(&self) -> usize {
        self.num_joints
    }

    pub fn reference_joint(&self) -> usize {
        self.reference_joint
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    #[inline]
    pub fn joint(&self, frame: usize, joint: usize) -> &Joint {
        &self.joints[frame * self.num_joints + joint]
    }

    pub fn frame(&self, frame: usize) -> &[Joint] {
        &self.joints[frame * self.num_joints..(frame + 1) * self.num_joints]
    }
}

/// One labelled action clip.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSample {
    pub sample_id: String,
    pub class_label: usize,
    pub subject_id: usize,
    pub view_id: usize,
    pub depth: Option<DepthSequence>,
    pub skeleton: Option<SkeletonSequence>,
}

impl ActionSample {
    /// Assembles a sample, checking that paired depth and skeleton share a frame count.
    pub fn new(
        sample_id: impl Into<String>,
        class_label: usize,
        subject_id: usize,
        view_id: usize,
        depth: Option<DepthSequence>,
        skeleton: Option<SkeletonSequence>,
    ) -> Result<Self> {
        let sample_id = sample_id.into();
        if let (Some(d), Some(s)) = (&depth, &skeleton) {
            if d.num_frames() != s.num_frames() {
                return Err(Error::InvalidSequence(alloc::format!(
                    "sample {sample_id}: depth has {} frames, skeleton has {}",
                    d.num_frames(),
                    s.num_frames()
                )));
            }
        }
        Ok(Self {
            sample_id,
            class_label,
            subject_id,
            view_id,
            depth,
            skeleton,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Component {
    Hod,
    Hodg,
    Jpd,
    Jmv,
}

impl Component {
    /// Canonical concatenation order.
    pub const ALL: [Component; 4] = [Component::Hod, Component::Hodg, Component::Jpd, Component::Jmv];

    pub fn name(self) -> &'static str {
        match self {
            Component::Hod => "hod",
            Component::Hodg => "hodg",
            Component::Jpd => "jpd",
            Component::Jmv => "jmv",
        }
    }

    pub fn uses_depth(self) -> bool {
        matches!(self, Component::Hod | Component::Hodg)
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hod" => Ok(Component::Hod),
            "hodg" => Ok(Component::Hodg),
            "jpd" => Ok(Component::Jpd),
            "jmv" => Ok(Component::Jmv),
            other => Err(Error::InvalidConfig(alloc::format!(
                "unknown component {other:?} (expected hod, hodg, jpd or jmv)"
            ))),
        }
    }
}

/// A subset of the four feature components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ComponentSet(u8);

impl ComponentSet {
    pub const EMPTY: ComponentSet = ComponentSet(0);
    pub const ALL: ComponentSet = ComponentSet(0b1111);

    pub fn of(components: &[Component]) -> Self {
        components.iter().fold(Self::EMPTY, |s, &c| s.with(c))
    }

    pub fn with(self, c: Component) -> Self {
        ComponentSet(self.0 | c.bit())
    }

    pub fn contains(self, c: Component) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Enabled components in canonical order.
    pub fn iter(self) -> impl Iterator<Item = Component> {
        Component::ALL.into_iter().filter(move |&c| self.contains(c))
    }

    pub fn needs_depth(self) -> bool {
        self.iter().any(Component::uses_depth)
    }

    pub fn needs_skeleton(self) -> bool {
        self.iter().any(|c| !c.uses_depth())
    }
}

impl fmt::Display for ComponentSet {
    /// Joined with `+`, e.g. `hod+hodg`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            f.write_str(c.name())?;
        }
        Ok(())
    }
}

impl FromStr for ComponentSet {
    type Err = Error;

    /// Accepts `all` or a list separated by `,` or `+`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(ComponentSet::ALL);
        }
        let mut set = ComponentSet::EMPTY;
        for part in s.split([',', '+']).filter(|p| !p.trim().is_empty()) {
            set = set.with(part.parse()?);
        }
        if set.is_empty() {
            return Err(Error::InvalidConfig("component list is empty".into()));
        }
        Ok(set)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for ComponentSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for ComponentSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A named, contiguous run of a feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Segment {
    pub component: Component,
    pub offset: usize,
    pub len: usize,
}

impl Segment {
    pub fn range(&self) -> core::ops::Range<usize> {
        self.offset..self.offset + self.len
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureLayout {
    segments: Vec<Segment>,
}

impl FeatureLayout {
    /// Builds a layout from `(component, length)` pairs, assigning contiguous offsets.
    pub fn from_lengths(parts: &[(Component, usize)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidConfig("layout needs at least one segment".into()));
        }
        let mut offset = 0;
        let mut segments = Vec::with_capacity(parts.len());
        for &(component, len) in parts {
            if segments.iter().any(|s: &Segment| s.component == component) {
                return Err(Error::InvalidConfig(alloc::format!(
                    "component {component} appears twice in layout"
                )));
            }
            segments.push(Segment {
                component,
                offset,
                len,
            });
            offset += len;
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_len(&self) -> usize {
        self.segments.iter().map(|s| s.len).sum()
    }

    pub fn segment(&self, component: Component) -> Option<&Segment> {
        self.segments.iter().find(|s| s.component == component)
    }

    /// Column names of the form `segment:index`.
    pub fn column_names(&self) -> impl Iterator<Item = String> + '_ {
        self.segments
            .iter()
            .flat_map(|s| (0..s.len).map(move |i| alloc::format!("{}:{i}", s.component)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
    layout: FeatureLayout,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>, layout: FeatureLayout) -> Result<Self> {
        if values.len() != layout.total_len() {
            return Err(Error::ShapeMismatch {
                expected: layout.total_len(),
                actual: values.len(),
            });
        }
        if let Some(col) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: 0, col });
        }
        Ok(Self { values, layout })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn layout(&self) -> &FeatureLayout {
        &self.layout
    }

    pub fn segment_values(&self, component: Component) -> Option<&[f64]> {
        self.layout.segment(component).map(|s| &self.values[s.range()])
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Feature extraction settings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct HdgConfig {
    /// Subvolume counts along (x, y, t) for `hod` and `hodg`.
    pub grid: [usize; 3],
    pub hod_bins: usize,
    /// Histogram sizes for the x, y and t derivative channels.
    pub hodg_bins: [usize; 3],
    pub jpd_bins: usize,
    /// Cell counts along (x, y, t) for each joint's movement volume.
    pub jmv_cells: [usize; 3],
    pub components: ComponentSet,
}

impl HdgConfig {
    /// 10x10x5 subvolumes, 5 depth bins, (7, 7, 6) derivative bins, 50 bins per joint
    /// offset component and 1x1x5 joint cells: 2500 + 10000 + 150 + 30J values.
    pub fn msr_compat() -> Self {
        Self {
            grid: [10, 10, 5],
            hod_bins: 5,
            hodg_bins: [7, 7, 6],
            jpd_bins: 50,
            jmv_cells: [1, 1, 5],
            components: ComponentSet::ALL,
        }
    }

    pub fn with_components(mut self, components: ComponentSet) -> Self {
        self.components = components;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let counts = self
            .grid
            .iter()
            .chain(&self.hodg_bins)
            .chain(&self.jmv_cells)
            .chain([&self.hod_bins, &self.jpd_bins]);
        if counts.into_iter().any(|&c| c == 0) {
            return Err(Error::InvalidConfig("all bin and cell counts must be >= 1".into()));
        }
        if self.components.is_empty() {
            return Err(Error::InvalidConfig("no feature components enabled".into()));
        }
        Ok(())
    }

    pub fn num_subvolumes(&self) -> usize {
        self.grid.iter().product()
    }

    pub fn hodg_bins_total(&self) -> usize {
        self.hodg_bins.iter().sum()
    }

    /// Length of one component's segment for a skeleton with `num_joints` joints.
    pub fn segment_len(&self, component: Component, num_joints: usize) -> usize {
        match component {
            Component::Hod => self.num_subvolumes() * self.hod_bins,
            Component::Hodg => self.num_subvolumes() * self.hodg_bins_total(),
            Component::Jpd => 3 * self.jpd_bins,
            Component::Jmv => num_joints * 6 * self.jmv_cells.iter().product::<usize>(),
        }
    }

    /// Stable 64-bit fingerprint (FNV-1a over the field values), used as a cache key.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let fields = self
            .grid
            .iter()
            .chain(&self.hodg_bins)
            .chain(&self.jmv_cells)
            .chain([&self.hod_bins, &self.jpd_bins])
            .map(|&v| v as u64)
            .chain([self.components.0 as u64]);
        for v in fields {
            for b in v.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

impl Default for HdgConfig {
    fn default() -> Self {
        Self::msr_compat()
    }
}

/// Segment layout for the enabled components, in canonical order.
pub fn layout_from_config(config: &HdgConfig, num_joints: usize) -> Result<FeatureLayout> {
    config.validate()?;
    if num_joints == 0 {
        return Err(Error::InvalidConfig("num_joints must be >= 1".into()));
    }
    let parts: Vec<(Component, usize)> = config
        .components
        .iter()
        .map(|c| (c, config.segment_len(c, num_joints)))
        .collect();
    FeatureLayout::from_lengths(&parts)
}

/// Forest sizes and the pruning threshold factor.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct HyperParams {
    pub pruning_trees: usize,
    pub classifier_trees: usize,
    /// Threshold factor: predictors are kept when their normalized importance exceeds
    /// `alpha` times the mean normalized importance.
    pub alpha: f64,
    pub rng_seed: u64,
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        if self.pruning_trees == 0 || self.classifier_trees == 0 {
            return Err(Error::InvalidConfig("tree counts must be >= 1".into()));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidConfig(alloc::format!(
                "alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Seed for the pruning forest.
    pub fn pruning_seed(&self) -> u64 {
        self.rng_seed
    }

    /// Seed for the classifier forest, distinct from the pruning stream.
    pub fn classifier_seed(&self) -> u64 {
        self.rng_seed ^ 0x9e37_79b9_7f4a_7c15
    }
}

impl Default for HyperParams {
    fn default() -> Self {
        Self {
            pruning_trees: 130,
            classifier_trees: 128,
            alpha: 3.5,
            rng_seed: 0,
        }
    }
}
