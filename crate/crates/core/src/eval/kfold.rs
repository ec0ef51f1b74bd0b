use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Metric;
use crate::corpus::Corpus;
use crate::folds::fold_indices;
use crate::pipeline::TextLearner;
use crate::stacker::prepare_folds;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldScores {
    pub scores: Vec<f64>,
    pub mean: f64,
}

impl FoldScores {
    pub fn new(scores: Vec<f64>) -> Self {
        let mean = if scores.is_empty() { 0.0 } else { scores.iter().sum::<f64>() / scores.len() as f64 };
        Self { scores, mean }
    }
}

/// Stratified k-fold evaluation: the learner is fitted on each training
/// part and scored on the held-out part.
pub fn kfold_evaluate(learner: &dyn TextLearner, corpus: &Corpus, k: usize, metric: &Metric, seed: u64) -> Result<FoldScores> {
    let (_, _, folds) = prepare_folds(corpus, k, seed)?;
    let mut scores = Vec::with_capacity(k);
    for (train, test) in fold_indices(&folds, k) {
        let train_corpus = corpus.subset(&train);
        let test_corpus = corpus.subset(&test);
        let pred = learner.fit_predict(&train_corpus, &test_corpus.texts())?;
        let pred: Vec<&str> = pred.iter().map(String::as_str).collect();
        scores.push(metric.score(&test_corpus.labels(), &pred)?);
    }
    Ok(FoldScores::new(scores))
}
