//! Swapping the second-stage classifier over fixed stacked features.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::ranks::{mean_ranks, midpoint_ranks};
use super::Metric;
use crate::classic::{GaussianNb, MultinomialNb, NearestCentroid};
use crate::evodag::{evolve_encoded, EvoDagParams};
use crate::linmodel::{argmax, train_ovr_encoded, SvmParams};
use crate::vector::DenseMatrix;
use crate::Result;

/// A classifier over dense rows with labels `0..classes.len()`.
pub trait DenseClassifier {
    fn name(&self) -> String;

    fn fit_predict(&self, train_x: &DenseMatrix, train_y: &[usize], classes: &[String], test_x: &DenseMatrix) -> Result<Vec<usize>>;
}

pub struct EvoDagClassifier(pub EvoDagParams);

impl DenseClassifier for EvoDagClassifier {
    fn name(&self) -> String {
        "EvoDAG".into()
    }

    fn fit_predict(&self, x: &DenseMatrix, y: &[usize], classes: &[String], test: &DenseMatrix) -> Result<Vec<usize>> {
        evolve_encoded(x, y, classes.to_vec(), &self.0)?.predict_matrix(test)
    }
}

pub struct GaussianNbClassifier;

impl DenseClassifier for GaussianNbClassifier {
    fn name(&self) -> String {
        "GaussianNB".into()
    }

    fn fit_predict(&self, x: &DenseMatrix, y: &[usize], classes: &[String], test: &DenseMatrix) -> Result<Vec<usize>> {
        let m = GaussianNb::fit(x, y, classes.len())?;
        Ok(test.iter_rows().map(|r| argmax(&m.decision(r))).collect())
    }
}

pub struct MultinomialNbClassifier;

impl DenseClassifier for MultinomialNbClassifier {
    fn name(&self) -> String {
        "MultinomialNB".into()
    }

    fn fit_predict(&self, x: &DenseMatrix, y: &[usize], classes: &[String], test: &DenseMatrix) -> Result<Vec<usize>> {
        let m = MultinomialNb::fit(x, y, classes.len())?;
        Ok(test.iter_rows().map(|r| argmax(&m.decision(r))).collect())
    }
}

pub struct NearestCentroidClassifier;

impl DenseClassifier for NearestCentroidClassifier {
    fn name(&self) -> String {
        "NearestCentroid".into()
    }

    fn fit_predict(&self, x: &DenseMatrix, y: &[usize], classes: &[String], test: &DenseMatrix) -> Result<Vec<usize>> {
        let m = NearestCentroid::fit(x, y, classes.len())?;
        Ok(test.iter_rows().map(|r| argmax(&m.decision(r))).collect())
    }
}

pub struct LinearOvrClassifier(pub SvmParams);

impl DenseClassifier for LinearOvrClassifier {
    fn name(&self) -> String {
        "LinearSVM".into()
    }

    fn fit_predict(&self, x: &DenseMatrix, y: &[usize], classes: &[String], test: &DenseMatrix) -> Result<Vec<usize>> {
        let rows: Vec<&[f64]> = x.iter_rows().collect();
        let m = train_ovr_encoded(&rows, y, classes.to_vec(), &self.0)?;
        test.iter_rows().map(|r| m.predict_index(r)).collect()
    }
}

/// The bundled alternatives plus EvoDAG.
pub fn default_classifiers(evodag: EvoDagParams, svm: SvmParams) -> Vec<Box<dyn DenseClassifier>> {
    alloc::vec![
        Box::new(EvoDagClassifier(evodag)),
        Box::new(GaussianNbClassifier),
        Box::new(MultinomialNbClassifier),
        Box::new(NearestCentroidClassifier),
        Box::new(LinearOvrClassifier(svm)),
    ]
}

#[derive(Debug, Clone)]
pub struct DenseDataset {
    pub name: String,
    pub classes: Vec<String>,
    pub train_x: DenseMatrix,
    pub train_y: Vec<usize>,
    pub test_x: DenseMatrix,
    pub test_y: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub systems: Vec<String>,
    pub datasets: Vec<String>,
    /// `[dataset][system]`
    pub scores: Vec<Vec<f64>>,
    /// `[dataset][system]`, 1 = best.
    pub ranks: Vec<Vec<f64>>,
    pub mean_ranks: Vec<f64>,
}

pub fn compare_second_stage(classifiers: &[&dyn DenseClassifier], datasets: &[DenseDataset], metric: &Metric) -> Result<ComparisonReport> {
    let mut scores = Vec::with_capacity(datasets.len());
    for d in datasets {
        let truth: Vec<&str> = d.test_y.iter().map(|&y| d.classes[y].as_str()).collect();
        let mut row = Vec::with_capacity(classifiers.len());
        for c in classifiers {
            let pred = c.fit_predict(&d.train_x, &d.train_y, &d.classes, &d.test_x)?;
            let pred: Vec<&str> = pred.iter().map(|&p| d.classes[p].as_str()).collect();
            row.push(metric.score(&truth, &pred)?);
        }
        scores.push(row);
    }
    let ranks: Vec<Vec<f64>> = scores.iter().map(|s| midpoint_ranks(s)).collect();
    Ok(ComparisonReport {
        systems: classifiers.iter().map(|c| c.name()).collect(),
        datasets: datasets.iter().map(|d| d.name.clone()).collect(),
        mean_ranks: mean_ranks(&ranks),
        scores,
        ranks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn blobs() -> DenseDataset {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![(i % 2) as f64 * 4.0 + (i as f64) * 0.01, 1.0]).collect();
        let y: Vec<usize> = (0..20).map(|i| i % 2).collect();
        let x = DenseMatrix::from_rows(&rows).unwrap();
        DenseDataset { name: "blobs".into(), classes: vec!["a".into(), "b".into()], train_x: x.clone(), train_y: y.clone(), test_x: x, test_y: y }
    }

    #[test]
    fn duplicates_tie_and_single_ranks_first() {
        let nc = NearestCentroidClassifier;
        let r = compare_second_stage(&[&nc, &nc], &[blobs()], &Metric::MacroF1).unwrap();
        assert_eq!(r.scores[0][0], r.scores[0][1]);
        assert_eq!(r.ranks[0], vec![1.5, 1.5]);
        let r = compare_second_stage(&[&GaussianNbClassifier], &[blobs()], &Metric::MacroF1).unwrap();
        assert_eq!(r.ranks[0], vec![1.0]);
    }
}
