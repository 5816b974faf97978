//! Reconstruction metrics and thresholded QA scoring.

pub mod assign;
pub mod qa_score;
pub mod recon;
pub mod text;

pub use assign::assign;
pub use qa_score::{judge, score_qa, Accuracy, GtItem, QaScore, ScoreError, THRESHOLDS};
pub use recon::{
    aggregate_reports, element_metrics, evaluate_reconstruction, evaluate_reconstruction_with,
    match_elements, match_elements_with, pair_cost, position_distance, text_metrics,
    ElementAssignment, ElementMetrics, EvalOptions, KindAssignment, KindReport, ReconReport,
    ReconSummary, TextMetrics,
};
pub use text::{levenshtein, similarity};
