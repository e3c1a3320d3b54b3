use alloc::string::String;
use core::fmt;

use crate::model::Component;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A configuration value violates its documented range.
    InvalidConfig(String),
    /// A depth or skeleton sequence is malformed.
    InvalidSequence(String),
    /// An enabled feature component needs a modality the sample does not carry.
    MissingModality {
        component: Component,
        sample_id: String,
    },
    /// Vector or matrix dimensions disagree.
    ShapeMismatch { expected: usize, actual: usize },
    NonFinite { row: usize, col: usize },
    /// Training labels contain fewer than two distinct classes.
    SingleClass,
    TooFewRows(usize),
    /// Every normalized importance is zero, so no threshold can be formed.
    ZeroImportance,
    /// No predictor exceeds the pruning threshold.
    EmptySelection { alpha: f64, theta: f64 },
    EmptyClass(usize),
    TooFewSubjects(usize),
    TooFewViews(usize),
    InvalidPlan(String),
    UnknownSample(String),
    Manifest(String),
    EmptyGrid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InvalidSequence(msg) => write!(f, "invalid sequence: {msg}"),
            Error::MissingModality {
                component,
                sample_id,
            } => write!(
                f,
                "sample {sample_id}: component {component} needs {} data, which is missing",
                if component.uses_depth() {
                    "depth"
                } else {
                    "skeleton"
                }
            ),
            Error::ShapeMismatch { expected, actual } => {
                write!(f, "shape mismatch: expected {expected}, got {actual}")
            }
            Error::NonFinite { row, col } => {
                write!(f, "non-finite feature value at row {row}, column {col}")
            }
            Error::SingleClass => write!(f, "training labels contain a single class"),
            Error::TooFewRows(n) => write!(f, "need at least 2 training rows, got {n}"),
            Error::ZeroImportance => write!(f, "all predictor importances are zero"),
            Error::EmptySelection { alpha, theta } => write!(
                f,
                "no predictor exceeds threshold {theta} (alpha = {alpha}); alpha is too large"
            ),
            Error::EmptyClass(c) => write!(f, "class {c} has no test samples"),
            Error::TooFewSubjects(n) => write!(f, "need at least 2 subjects, found {n}"),
            Error::TooFewViews(n) => write!(f, "cross-view protocol needs at least 3 views, found {n}"),
            Error::InvalidPlan(msg) => write!(f, "invalid split plan: {msg}"),
            Error::UnknownSample(id) => write!(f, "unknown sample id {id}"),
            Error::Manifest(msg) => write!(f, "invalid manifest: {msg}"),
            Error::EmptyGrid(which) => write!(f, "{which} grid is empty"),
        }
    }
}

impl core::error::Error for Error {}
