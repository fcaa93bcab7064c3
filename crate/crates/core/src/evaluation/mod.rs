//! Detection metrics and the cross-validated evaluation protocol.

mod auc;
mod benchmark;
mod folds;
mod stability;
mod threshold;

pub(crate) use auc::check_binary_labels;
pub use auc::roc_auc;
pub use benchmark::{
    benchmark_run, ConfigSummary, DetectorFamily, EvaluationReport, Protocol, ReportEntry,
};
pub use folds::{fold_split, stratified_kfold};
pub use stability::rank_stability_check;
pub use threshold::f1_optimal_threshold;
