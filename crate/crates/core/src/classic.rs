//! Nearest centroid and naive Bayes classifiers over dense features.
//!
//! They serve both as EvoDAG classifier nodes and as stand-alone
//! second-stage baselines. Decision values are "larger is better": negated
//! Euclidean distance for the centroid model and joint log-likelihood for
//! the Bayes models.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::vector::DenseMatrix;
use crate::{Error, Result};

fn class_rows(y: &[usize], n_classes: usize) -> Result<Vec<Vec<usize>>> {
    let mut rows = vec![Vec::new(); n_classes];
    for (r, &c) in y.iter().enumerate() {
        rows[c].push(r);
    }
    if rows.iter().any(Vec::is_empty) {
        return Err(Error::InvalidParameter("every class needs at least one training row".into()));
    }
    Ok(rows)
}

fn check(x: &DenseMatrix, y: &[usize]) -> Result<()> {
    if x.rows() != y.len() {
        return Err(Error::LengthMismatch { left: x.rows(), right: y.len() });
    }
    if x.rows() == 0 || x.cols() == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearestCentroid {
    centroids: Vec<Vec<f64>>,
}

impl NearestCentroid {
    pub fn fit(x: &DenseMatrix, y: &[usize], n_classes: usize) -> Result<Self> {
        check(x, y)?;
        let rows = class_rows(y, n_classes)?;
        let centroids = rows
            .iter()
            .map(|rs| {
                let mut c = vec![0.0; x.cols()];
                for &r in rs {
                    for (acc, v) in c.iter_mut().zip(x.row(r)) {
                        *acc += v;
                    }
                }
                c.iter_mut().for_each(|v| *v /= rs.len() as f64);
                c
            })
            .collect();
        Ok(Self { centroids })
    }

    pub fn decision(&self, row: &[f64]) -> Vec<f64> {
        self.centroids
            .iter()
            .map(|c| -libm::sqrt(c.iter().zip(row).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    log_prior: Vec<f64>,
    means: Vec<Vec<f64>>,
    vars: Vec<Vec<f64>>,
}

impl GaussianNb {
    pub fn fit(x: &DenseMatrix, y: &[usize], n_classes: usize) -> Result<Self> {
        check(x, y)?;
        let rows = class_rows(y, n_classes)?;
        let n = y.len() as f64;
        // variance floor relative to the widest feature
        let max_var = (0..x.cols())
            .map(|j| {
                let col = x.column(j);
                let m = col.iter().sum::<f64>() / n;
                col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n
            })
            .fold(0.0, f64::max);
        let eps = (1e-9 * max_var).max(1e-12);
        let mut means = Vec::with_capacity(n_classes);
        let mut vars = Vec::with_capacity(n_classes);
        let mut log_prior = Vec::with_capacity(n_classes);
        for rs in &rows {
            let cnt = rs.len() as f64;
            let mut mu = vec![0.0; x.cols()];
            for &r in rs {
                for (m, v) in mu.iter_mut().zip(x.row(r)) {
                    *m += v;
                }
            }
            mu.iter_mut().for_each(|m| *m /= cnt);
            let mut var = vec![0.0; x.cols()];
            for &r in rs {
                for ((s, v), m) in var.iter_mut().zip(x.row(r)).zip(&mu) {
                    *s += (v - m) * (v - m);
                }
            }
            var.iter_mut().for_each(|s| *s = *s / cnt + eps);
            means.push(mu);
            vars.push(var);
            log_prior.push(libm::log(cnt / n));
        }
        Ok(Self { log_prior, means, vars })
    }

    pub fn decision(&self, row: &[f64]) -> Vec<f64> {
        (0..self.log_prior.len())
            .map(|k| {
                let ll: f64 = row
                    .iter()
                    .zip(&self.means[k])
                    .zip(&self.vars[k])
                    .map(|((x, m), v)| -0.5 * (libm::log(2.0 * PI * v) + (x - m) * (x - m) / v))
                    .sum();
                self.log_prior[k] + ll
            })
            .collect()
    }
}

/// Multinomial naive Bayes with Laplace smoothing. Features are shifted by
/// their per-column training minimum (and clipped at zero) so counts are
/// nonnegative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinomialNb {
    shift: Vec<f64>,
    log_prior: Vec<f64>,
    feature_log_prob: Vec<Vec<f64>>,
}

impl MultinomialNb {
    pub const ALPHA: f64 = 1.0;

    pub fn fit(x: &DenseMatrix, y: &[usize], n_classes: usize) -> Result<Self> {
        check(x, y)?;
        let rows = class_rows(y, n_classes)?;
        let shift: Vec<f64> = (0..x.cols()).map(|j| x.column(j).into_iter().fold(f64::INFINITY, f64::min)).collect();
        let n = y.len() as f64;
        let m = x.cols() as f64;
        let mut log_prior = Vec::with_capacity(n_classes);
        let mut feature_log_prob = Vec::with_capacity(n_classes);
        for rs in &rows {
            let mut totals = vec![0.0; x.cols()];
            for &r in rs {
                for ((t, v), s) in totals.iter_mut().zip(x.row(r)).zip(&shift) {
                    *t += v - s;
                }
            }
            let sum: f64 = totals.iter().sum();
            feature_log_prob.push(totals.iter().map(|t| libm::log((t + Self::ALPHA) / (sum + Self::ALPHA * m))).collect());
            log_prior.push(libm::log(rs.len() as f64 / n));
        }
        Ok(Self { shift, log_prior, feature_log_prob })
    }

    pub fn decision(&self, row: &[f64]) -> Vec<f64> {
        (0..self.log_prior.len())
            .map(|k| {
                self.log_prior[k]
                    + row
                        .iter()
                        .zip(&self.shift)
                        .zip(&self.feature_log_prob[k])
                        .map(|((x, s), lp)| (x - s).max(0.0) * lp)
                        .sum::<f64>()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linmodel::argmax;

    fn blobs() -> (DenseMatrix, Vec<usize>) {
        let rows = vec![
            vec![0.0, 0.1],
            vec![0.2, 0.0],
            vec![0.1, 0.2],
            vec![5.0, 5.1],
            vec![5.2, 4.9],
            vec![4.8, 5.0],
        ];
        (DenseMatrix::from_rows(&rows).unwrap(), vec![0, 0, 0, 1, 1, 1])
    }

    #[test]
    fn all_three_separate_blobs() {
        let (x, y) = blobs();
        let nc = NearestCentroid::fit(&x, &y, 2).unwrap();
        let gnb = GaussianNb::fit(&x, &y, 2).unwrap();
        for (r, &c) in y.iter().enumerate() {
            assert_eq!(argmax(&nc.decision(x.row(r))), c);
            assert_eq!(argmax(&gnb.decision(x.row(r))), c);
        }
    }

    #[test]
    fn multinomial_separates_proportions() {
        let rows = vec![vec![5.0, 0.0, 1.0], vec![4.0, 1.0, 1.0], vec![0.0, 5.0, 1.0], vec![1.0, 4.0, 1.0]];
        let x = DenseMatrix::from_rows(&rows).unwrap();
        let y = vec![0, 0, 1, 1];
        let mnb = MultinomialNb::fit(&x, &y, 2).unwrap();
        for (r, &c) in y.iter().enumerate() {
            assert_eq!(argmax(&mnb.decision(x.row(r))), c);
        }
    }

    #[test]
    fn centroid_distance_is_negated() {
        let (x, y) = blobs();
        let nc = NearestCentroid::fit(&x, &y, 2).unwrap();
        let d = nc.decision(&[0.1, 0.1]);
        assert!(d[0] <= 0.0 && d[0].abs() < 1e-9);
    }

    #[test]
    fn empty_class_rejected() {
        let (x, y) = blobs();
        assert!(NearestCentroid::fit(&x, &y, 3).is_err());
    }
}
