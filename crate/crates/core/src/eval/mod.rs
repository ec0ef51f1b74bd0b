//! Metrics, cross-validated evaluation, model-subset ablation and
//! second-stage classifier comparison.

pub mod ablation;
pub mod compare;
pub mod kfold;
pub mod metrics;
pub mod ranks;

pub use ablation::{ablation_study, AblationDataset, AblationReport, AblationStrategy, CellRunner, SequentialRunner};
pub use compare::{compare_second_stage, ComparisonReport, DenseClassifier, DenseDataset};
pub use kfold::{kfold_evaluate, FoldScores};
pub use metrics::{balanced_accuracy, macro_f1, macro_recall, pearson, Metric};
pub use ranks::{mean_ranks, midpoint_ranks};
pub use compare::{
    default_classifiers, EvoDagClassifier, GaussianNbClassifier, LinearOvrClassifier, MultinomialNbClassifier,
    NearestCentroidClassifier,
};
