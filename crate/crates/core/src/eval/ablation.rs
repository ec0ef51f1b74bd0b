//! Which first-stage models matter: scores of model subsets, either all of
//! them or grown greedily from TR.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::kfold::{kfold_evaluate, FoldScores};
use super::ranks::{mean_ranks, midpoint_ranks};
use super::Metric;
use crate::corpus::Corpus;
use crate::models::ModelKind;
use crate::pipeline::{canonical_kinds, PipelineBlueprint};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AblationStrategy {
    /// Start from TR, add the best remaining kind until all are in.
    BottomUp,
    /// Every non-empty subset.
    Exhaustive,
}

impl core::str::FromStr for AblationStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bottom-up" | "bottom_up" => Ok(AblationStrategy::BottomUp),
            "exhaustive" => Ok(AblationStrategy::Exhaustive),
            _ => Err(Error::InvalidParameter(alloc::format!("unknown ablation strategy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetResult {
    pub kinds: Vec<ModelKind>,
    /// One entry per dataset.
    pub fold_scores: Vec<FoldScores>,
    /// Rank among all evaluated subsets, per dataset.
    pub ranks: Vec<f64>,
}

impl SubsetResult {
    pub fn label(&self) -> String {
        let names: Vec<&str> = self.kinds.iter().map(|k| k.name()).collect();
        names.join("+")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub datasets: Vec<String>,
    pub strategy: AblationStrategy,
    /// In evaluation order.
    pub subsets: Vec<SubsetResult>,
    /// Bottom-up: the subset kept after each step, starting with TR.
    pub trajectory: Vec<Vec<ModelKind>>,
}

impl AblationReport {
    pub fn evaluations(&self) -> usize {
        self.subsets.len()
    }
}

/// Evaluates a batch of subsets on every dataset, `[subset][dataset]`.
pub type BatchEvaluator<'a> = dyn FnMut(&[Vec<ModelKind>]) -> Result<Vec<Vec<FoldScores>>> + 'a;

/// Subset enumeration independent of how a subset is scored.
pub fn ablation_search(
    datasets: Vec<String>,
    kinds: &[ModelKind],
    strategy: AblationStrategy,
    evaluate: &mut BatchEvaluator<'_>,
) -> Result<AblationReport> {
    let kinds = canonical_kinds(kinds);
    if kinds.is_empty() {
        return Err(Error::InvalidParameter("no model kinds to ablate".into()));
    }
    let mut evaluated: Vec<(Vec<ModelKind>, Vec<FoldScores>)> = Vec::new();
    let mut trajectory = Vec::new();
    match strategy {
        AblationStrategy::Exhaustive => {
            let subsets: Vec<Vec<ModelKind>> = (1u32..(1 << kinds.len()))
                .map(|mask| kinds.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, k)| *k).collect())
                .collect();
            let scores = evaluate(&subsets)?;
            evaluated.extend(subsets.into_iter().zip(scores));
        }
        AblationStrategy::BottomUp => {
            if !kinds.contains(&ModelKind::Tr) {
                return Err(Error::InvalidParameter("bottom-up ablation starts from TR".into()));
            }
            let mut current = alloc::vec![ModelKind::Tr];
            let first = evaluate(core::slice::from_ref(&current))?;
            evaluated.push((current.clone(), first.into_iter().next().unwrap_or_default()));
            trajectory.push(current.clone());
            let mut remaining: Vec<ModelKind> = kinds.iter().copied().filter(|k| *k != ModelKind::Tr).collect();
            while !remaining.is_empty() {
                let candidates: Vec<Vec<ModelKind>> = remaining
                    .iter()
                    .map(|r| {
                        let mut c = current.clone();
                        c.push(*r);
                        canonical_kinds(&c)
                    })
                    .collect();
                let scores = evaluate(&candidates)?;
                let best = best_candidate(&scores, datasets.len());
                current = candidates[best].clone();
                remaining.remove(best);
                trajectory.push(current.clone());
                evaluated.extend(candidates.into_iter().zip(scores));
            }
        }
    }
    let n_d = datasets.len();
    let per_dataset_ranks: Vec<Vec<f64>> = (0..n_d)
        .map(|d| midpoint_ranks(&evaluated.iter().map(|(_, s)| s[d].mean).collect::<Vec<_>>()))
        .collect();
    let subsets = evaluated
        .into_iter()
        .enumerate()
        .map(|(i, (kinds, fold_scores))| SubsetResult { kinds, fold_scores, ranks: (0..n_d).map(|d| per_dataset_ranks[d][i]).collect() })
        .collect();
    Ok(AblationReport { datasets, strategy, subsets, trajectory })
}

/// Best mean rank across datasets; ties go to the higher mean score, then
/// to the earlier candidate.
fn best_candidate(scores: &[Vec<FoldScores>], n_datasets: usize) -> usize {
    let table: Vec<Vec<f64>> = (0..n_datasets)
        .map(|d| midpoint_ranks(&scores.iter().map(|s| s[d].mean).collect::<Vec<_>>()))
        .collect();
    let ranks = mean_ranks(&table);
    let mean_score = |i: usize| scores[i].iter().map(|s| s.mean).sum::<f64>() / n_datasets.max(1) as f64;
    let mut best = 0;
    for i in 1..scores.len() {
        let better = match ranks.get(i).zip(ranks.get(best)) {
            Some((a, b)) if a < b => true,
            Some((a, b)) if a == b => mean_score(i) > mean_score(best),
            _ => false,
        };
        if better {
            best = i;
        }
    }
    best
}

/// Executes independent evaluation cells; implementations may run them
/// concurrently but must return results in cell order.
pub trait CellRunner {
    fn run(&self, n: usize, cell: &(dyn Fn(usize) -> Result<FoldScores> + Sync)) -> Vec<Result<FoldScores>>;
}

pub struct SequentialRunner;

impl CellRunner for SequentialRunner {
    fn run(&self, n: usize, cell: &(dyn Fn(usize) -> Result<FoldScores> + Sync)) -> Vec<Result<FoldScores>> {
        (0..n).map(cell).collect()
    }
}

pub struct AblationDataset {
    pub name: String,
    pub corpus: Corpus,
    /// Must provide every kind being ablated.
    pub blueprint: PipelineBlueprint,
}

/// k-fold scores of model subsets on every dataset.
pub fn ablation_study(
    datasets: &[AblationDataset],
    kinds: &[ModelKind],
    k: usize,
    metric: &Metric,
    strategy: AblationStrategy,
    seed: u64,
    runner: &dyn CellRunner,
) -> Result<AblationReport> {
    let names = datasets.iter().map(|d| d.name.clone()).collect();
    let mut evaluate = |subsets: &[Vec<ModelKind>]| -> Result<Vec<Vec<FoldScores>>> {
        let blueprints: Vec<Vec<PipelineBlueprint>> = subsets
            .iter()
            .map(|s| datasets.iter().map(|d| d.blueprint.with_kinds(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let n_d = datasets.len();
        let cell = |i: usize| {
            let (s, d) = (i / n_d, i % n_d);
            kfold_evaluate(&blueprints[s][d], &datasets[d].corpus, k, metric, seed)
        };
        let results = runner.run(subsets.len() * n_d, &cell);
        let mut it = results.into_iter();
        (0..subsets.len()).map(|_| (0..n_d).map(|_| it.next().expect("one result per cell")).collect()).collect()
    };
    ablation_search(names, kinds, strategy, &mut evaluate)
}
