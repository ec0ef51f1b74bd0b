//! Worker pool sized by `STACKSA_THREADS`.

use rayon::prelude::*;
use stacksa_core::eval::{CellRunner, FoldScores};
use stacksa_core::models::FirstStageModel;
use stacksa_core::pipeline::PipelineBlueprint;
use stacksa_core::stacker::{self, StackedModel, StackedTrainingMatrix};
use stacksa_core::vector::DenseMatrix;
use stacksa_core::{Corpus, Result};

pub const THREADS_ENV: &str = "STACKSA_THREADS";

/// `STACKSA_THREADS` when set to a positive integer, else rayon's default.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

pub fn pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = configured_threads() {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

pub struct RayonRunner {
    pool: rayon::ThreadPool,
}

impl RayonRunner {
    pub fn new() -> Self {
        Self { pool: pool() }
    }
}

impl Default for RayonRunner {
    fn default() -> Self {
        Self::new()
    }
}

impl CellRunner for RayonRunner {
    fn run(&self, n: usize, cell: &(dyn Fn(usize) -> Result<FoldScores> + Sync)) -> Vec<Result<FoldScores>> {
        self.pool.install(|| (0..n).into_par_iter().map(cell).collect())
    }
}

/// Fits a blueprint with member blocks built concurrently. The result does
/// not depend on the number of workers.
pub fn fit_blueprint(blueprint: &PipelineBlueprint, train: &Corpus) -> Result<(StackedModel, StackedTrainingMatrix)> {
    let cfg = &blueprint.stack;
    let members = blueprint.members(train)?;
    let (classes, labels, folds) = stacker::prepare_folds(train, cfg.k, cfg.seed)?;
    let texts = train.texts();
    let blocks: Vec<Result<_>> = pool().install(|| {
        members
            .par_iter()
            .map(|m: &FirstStageModel| stacker::member_block(m, &texts, &labels, &classes, &folds, cfg.k, &cfg.svm))
            .collect()
    });
    let (blocks, outers): (Vec<DenseMatrix>, Vec<_>) = blocks.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();
    let matrix = StackedTrainingMatrix {
        features: DenseMatrix::hconcat(&blocks)?,
        labels,
        folds,
        member_kinds: members.iter().map(FirstStageModel::kind).collect(),
    };
    let model = stacker::assemble(members, outers, &matrix, classes, cfg)?;
    Ok((model, matrix))
}
