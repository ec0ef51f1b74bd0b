//! Out-of-fold stacking of first-stage models under an EvoDAG classifier.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{encode_labels, Corpus};
use crate::evodag::{evolve_encoded, EvoDagModel, EvoDagParams};
use crate::folds::{fold_indices, stratified_folds};
use crate::linmodel::{argmax, train_ovr_encoded, LinearOvrModel, SvmParams};
use crate::models::{FirstStageModel, ModelKind};
use crate::vector::{DenseMatrix, FeatureVec};
use crate::{Error, Result};

pub const DEFAULT_K: usize = 5;

/// Trains the per-fold outer classifier. The linear SVM is the real one;
/// other implementations exist for probing the fold plumbing.
pub trait FoldTrainer {
    type Model;

    fn train(&self, x: &[&FeatureVec], y: &[usize], classes: &[String]) -> Result<Self::Model>;

    fn decision(&self, model: &Self::Model, x: &FeatureVec) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LinearTrainer(pub SvmParams);

impl FoldTrainer for LinearTrainer {
    type Model = LinearOvrModel;

    fn train(&self, x: &[&FeatureVec], y: &[usize], classes: &[String]) -> Result<LinearOvrModel> {
        train_ovr_encoded(x, y, classes.to_vec(), &self.0)
    }

    fn decision(&self, model: &LinearOvrModel, x: &FeatureVec) -> Result<Vec<f64>> {
        model.decision_function(x)
    }
}

/// Decision values for every row, each produced by a model trained on the
/// other folds. Returns a `rows × classes` matrix.
pub fn out_of_fold_decisions<T: FoldTrainer>(
    x: &[FeatureVec],
    labels: &[usize],
    classes: &[String],
    folds: &[usize],
    k: usize,
    trainer: &T,
) -> Result<DenseMatrix> {
    if x.len() != labels.len() || folds.len() != labels.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: labels.len() });
    }
    let c = classes.len();
    let mut out = DenseMatrix::zeros(x.len(), c);
    let mut written = alloc::vec![false; x.len()];
    for (train, test) in fold_indices(folds, k) {
        let xt: Vec<&FeatureVec> = train.iter().map(|&r| &x[r]).collect();
        let yt: Vec<usize> = train.iter().map(|&r| labels[r]).collect();
        let model = trainer.train(&xt, &yt, classes)?;
        for &r in &test {
            let d = trainer.decision(&model, &x[r])?;
            if d.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: d.len() });
            }
            out.row_mut(r).copy_from_slice(&d);
            written[r] = true;
        }
    }
    debug_assert!(written.iter().all(|&w| w));
    Ok(out)
}

/// Out-of-fold outer-classifier features of one first-stage model over a
/// labelled corpus, with stratified folds drawn from `seed`.
pub fn out_of_fold_features(
    model: &FirstStageModel,
    corpus: &Corpus,
    k: usize,
    seed: u64,
    svm: &SvmParams,
) -> Result<DenseMatrix> {
    let classes = corpus.classes();
    let labels = encode_labels(&corpus.labels(), &classes)?;
    let folds = stratified_folds(&labels, classes.len(), k, seed)?;
    let x = model.transform_all(&corpus.texts());
    out_of_fold_decisions(&x, &labels, &classes, &folds, k, &LinearTrainer(*svm))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackConfig {
    pub k: usize,
    /// Seeds the fold assignment.
    pub seed: u64,
    pub svm: SvmParams,
    pub evodag: EvoDagParams,
}

impl Default for StackConfig {
    fn default() -> Self {
        Self { k: DEFAULT_K, seed: 0, svm: SvmParams::default(), evodag: EvoDagParams::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackedMember {
    pub model: FirstStageModel,
    /// Outer classifier retrained on the whole training set.
    pub outer: LinearOvrModel,
}

/// The training features handed to EvoDAG.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedTrainingMatrix {
    pub features: DenseMatrix,
    pub labels: Vec<usize>,
    pub folds: Vec<usize>,
    pub member_kinds: Vec<ModelKind>,
}

impl StackedTrainingMatrix {
    /// Columns contributed by member `j`.
    pub fn block(&self, j: usize, n_classes: usize) -> DenseMatrix {
        let cols: Vec<Vec<f64>> = (j * n_classes..(j + 1) * n_classes).map(|c| self.features.column(c)).collect();
        let rows: Vec<Vec<f64>> = (0..self.features.rows()).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        DenseMatrix::from_rows(&rows).unwrap_or_else(|_| DenseMatrix::zeros(self.features.rows(), 0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackedModel {
    classes: Vec<String>,
    members: Vec<StackedMember>,
    second_stage: EvoDagModel,
    k: usize,
}

/// Out-of-fold block and full-data outer classifier for one member.
pub fn member_block(
    model: &FirstStageModel,
    texts: &[&str],
    labels: &[usize],
    classes: &[String],
    folds: &[usize],
    k: usize,
    svm: &SvmParams,
) -> Result<(DenseMatrix, LinearOvrModel)> {
    let x = model.transform_all(texts);
    let block = out_of_fold_decisions(&x, labels, classes, folds, k, &LinearTrainer(*svm))?;
    let outer = train_ovr_encoded(&x, labels, classes.to_vec(), svm)?;
    Ok((block, outer))
}

/// Validates the corpus and returns `(classes, labels, folds)`.
pub fn prepare_folds(corpus: &Corpus, k: usize, seed: u64) -> Result<(Vec<String>, Vec<usize>, Vec<usize>)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let classes = corpus.classes();
    if classes.len() < 2 {
        return Err(Error::DegenerateLabels);
    }
    let labels = encode_labels(&corpus.labels(), &classes)?;
    let mut counts = alloc::vec![0usize; classes.len()];
    labels.iter().for_each(|&l| counts[l] += 1);
    if let Some((c, &n)) = counts.iter().enumerate().find(|(_, &n)| n < k) {
        return Err(Error::InsufficientExamples { class: classes[c].clone(), count: n, k });
    }
    let folds = stratified_folds(&labels, classes.len(), k, seed)?;
    Ok((classes, labels, folds))
}

/// Builds the stacked training matrix and the full-data outer classifiers.
pub fn training_matrix(
    models: &[FirstStageModel],
    corpus: &Corpus,
    config: &StackConfig,
) -> Result<(StackedTrainingMatrix, Vec<LinearOvrModel>, Vec<String>)> {
    if models.is_empty() {
        return Err(Error::InvalidParameter("at least one first-stage model is required".into()));
    }
    let (classes, labels, folds) = prepare_folds(corpus, config.k, config.seed)?;
    let texts = corpus.texts();
    let mut blocks = Vec::with_capacity(models.len());
    let mut outers = Vec::with_capacity(models.len());
    for m in models {
        let (b, o) = member_block(m, &texts, &labels, &classes, &folds, config.k, &config.svm)?;
        blocks.push(b);
        outers.push(o);
    }
    let features = DenseMatrix::hconcat(&blocks)?;
    let member_kinds = models.iter().map(FirstStageModel::kind).collect();
    Ok((StackedTrainingMatrix { features, labels, folds, member_kinds }, outers, classes))
}

/// Assembles a model from precomputed blocks (used by callers that build
/// member blocks in parallel).
pub fn assemble(
    models: Vec<FirstStageModel>,
    outers: Vec<LinearOvrModel>,
    matrix: &StackedTrainingMatrix,
    classes: Vec<String>,
    config: &StackConfig,
) -> Result<StackedModel> {
    let second_stage = evolve_encoded(&matrix.features, &matrix.labels, classes.clone(), &config.evodag)?;
    let members = models.into_iter().zip(outers).map(|(model, outer)| StackedMember { model, outer }).collect();
    Ok(StackedModel { classes, members, second_stage, k: config.k })
}

/// Fits the stack: out-of-fold features per member, concatenated in member
/// order, then EvoDAG on top.
pub fn fit(models: Vec<FirstStageModel>, corpus: &Corpus, config: &StackConfig) -> Result<StackedModel> {
    let (matrix, outers, classes) = training_matrix(&models, corpus, config)?;
    assemble(models, outers, &matrix, classes, config)
}

impl StackedModel {
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn members(&self) -> &[StackedMember] {
        &self.members
    }

    pub fn member_kinds(&self) -> Vec<ModelKind> {
        self.members.iter().map(|m| m.model.kind()).collect()
    }

    pub fn second_stage(&self) -> &EvoDagModel {
        &self.second_stage
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Width of the second-stage input, members × classes.
    pub fn feature_width(&self) -> usize {
        self.members.len() * self.classes.len()
    }

    pub fn transform(&self, text: &str) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.feature_width());
        for m in &self.members {
            let x = m.model.transform(text);
            v.extend(m.outer.decision_function(&x).expect("dimensions fixed at fit time"));
        }
        v
    }

    pub fn transform_all<S: AsRef<str>>(&self, texts: &[S]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(texts.len(), self.feature_width());
        for (r, t) in texts.iter().enumerate() {
            m.row_mut(r).copy_from_slice(&self.transform(t.as_ref()));
        }
        m
    }

    pub fn decision_function(&self, text: &str) -> Vec<f64> {
        self.second_stage.decision_function(&self.transform(text)).expect("width fixed at fit time")
    }

    pub fn predict(&self, text: &str) -> (&str, Vec<f64>) {
        let d = self.decision_function(text);
        (&self.classes[argmax(&d)], d)
    }

    pub fn predict_all<S: AsRef<str>>(&self, texts: &[S]) -> Vec<&str> {
        if texts.is_empty() {
            return Vec::new();
        }
        let x = self.transform_all(texts);
        self.second_stage
            .decision_matrix(&x)
            .expect("width fixed at fit time")
            .iter()
            .map(|d| self.classes[argmax(d)].as_str())
            .collect()
    }
}
