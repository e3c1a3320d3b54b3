//! Accuracy metrics, split enumeration and the evaluation protocols built on them.

mod metrics;
mod protocol;
mod splits;

pub use metrics::{class_accuracy, ConfusionMatrix, EvalReport};
pub use protocol::{
    ablation_study, evaluate_plans, hyperparameter_sweep, mean_accuracy, run_protocol,
    AblationRow, FeatureCache, PlanOutcome, ProtocolResult, SweepCell, SweepGrid,
    ABLATION_COMBINATIONS,
};
pub use splits::{combinations, cross_view_splits, half_subject_splits, validation_plan, SplitPlan};
