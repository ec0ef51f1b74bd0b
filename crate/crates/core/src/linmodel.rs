//! Linear one-vs-rest max-margin classifier.
//!
//! Each class gets an L2-regularized L1-hinge separator (class vs rest)
//! trained by dual coordinate descent. The bias is handled as an extra
//! constant feature of value 1, so it is regularized like the weights.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::corpus::encode_labels;
use crate::folds::{derive_seed, rng};
use crate::vector::FeatureRow;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmParams {
    /// Regularization constant.
    pub c: f64,
    /// Maximum number of passes over the data.
    pub max_iter: usize,
    /// Stop when the projected-gradient spread falls below this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self { c: 1.0, max_iter: 1000, tol: 1e-4, seed: 0 }
    }
}

/// Index of the first maximum; ties go to the lower index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearOvrModel {
    classes: Vec<String>,
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
    feature_dim: usize,
}

/// Outcome of one binary fit.
#[derive(Debug, Clone)]
pub struct BinaryFit {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Dual objective `½‖w‖² + ½b² − Σα` after each epoch.
    pub objective: Vec<f64>,
    pub epochs: usize,
}

/// Trains one separator for `targets` in {+1, −1}.
pub fn train_binary<R: FeatureRow>(x: &[R], targets: &[f64], dim: usize, params: &SvmParams) -> BinaryFit {
    let n = x.len();
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut alpha = vec![0.0; n];
    let qii: Vec<f64> = x.iter().map(|r| r.squared_norm() + 1.0).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rng(params.seed);
    let mut objective = Vec::new();
    let mut epochs = 0;
    for _ in 0..params.max_iter {
        epochs += 1;
        order.shuffle(&mut rng);
        let mut pg_max = f64::NEG_INFINITY;
        let mut pg_min = f64::INFINITY;
        for &i in &order {
            let yi = targets[i];
            let g = yi * (x[i].dot(&w) + b) - 1.0;
            let pg = if alpha[i] == 0.0 {
                g.min(0.0)
            } else if alpha[i] == params.c {
                g.max(0.0)
            } else {
                g
            };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg != 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / qii[i]).clamp(0.0, params.c);
                let delta = (alpha[i] - old) * yi;
                x[i].add_scaled_to(delta, &mut w);
                b += delta;
            }
        }
        let norm2: f64 = w.iter().map(|v| v * v).sum::<f64>() + b * b;
        objective.push(0.5 * norm2 - alpha.iter().sum::<f64>());
        if pg_max - pg_min < params.tol {
            break;
        }
    }
    BinaryFit { weights: w, bias: b, objective, epochs }
}

/// Fits one separator per class of the sorted, duplicate-free label set.
pub fn train_ovr<R: FeatureRow, S: AsRef<str>>(x: &[R], y: &[S], params: &SvmParams) -> Result<LinearOvrModel> {
    let mut classes: Vec<String> = y.iter().map(|s| String::from(s.as_ref())).collect();
    classes.sort();
    classes.dedup();
    let encoded = encode_labels(y, &classes)?;
    train_ovr_encoded(x, &encoded, classes, params)
}

/// Like [`train_ovr`] with labels already encoded against `classes`.
/// Classes without any example still get a (constant negative) separator.
pub fn train_ovr_encoded<R: FeatureRow>(
    x: &[R],
    y: &[usize],
    classes: Vec<String>,
    params: &SvmParams,
) -> Result<LinearOvrModel> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let distinct = {
        let mut seen = vec![false; classes.len()];
        y.iter().for_each(|&c| seen[c] = true);
        seen.iter().filter(|&&s| s).count()
    };
    if distinct < 2 {
        return Err(Error::DegenerateLabels);
    }
    let dim = x[0].dim();
    if let Some(bad) = x.iter().find(|r| r.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: bad.dim() });
    }
    let mut weights = Vec::with_capacity(classes.len());
    let mut bias = Vec::with_capacity(classes.len());
    for k in 0..classes.len() {
        let targets: Vec<f64> = y.iter().map(|&c| if c == k { 1.0 } else { -1.0 }).collect();
        let p = SvmParams { seed: derive_seed(params.seed, k as u64), ..*params };
        let fit = train_binary(x, &targets, dim, &p);
        weights.push(fit.weights);
        bias.push(fit.bias);
    }
    Ok(LinearOvrModel { classes, weights, bias, feature_dim: dim })
}

impl LinearOvrModel {
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    /// `weights[i]·x + bias[i]` for each class, in class order.
    pub fn decision_function<R: FeatureRow + ?Sized>(&self, x: &R) -> Result<Vec<f64>> {
        if x.dim() != self.feature_dim {
            return Err(Error::DimensionMismatch { expected: self.feature_dim, got: x.dim() });
        }
        Ok(self.weights.iter().zip(&self.bias).map(|(w, b)| x.dot(w) + b).collect())
    }

    pub fn predict_index<R: FeatureRow + ?Sized>(&self, x: &R) -> Result<usize> {
        Ok(argmax(&self.decision_function(x)?))
    }

    pub fn predict<R: FeatureRow + ?Sized>(&self, x: &R) -> Result<&str> {
        Ok(&self.classes[self.predict_index(x)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::SparseVector;

    #[test]
    fn separable_pair() {
        let x = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let m = train_ovr(&x, &["A", "B"], &SvmParams::default()).unwrap();
        let d = m.decision_function(&x[0]).unwrap();
        assert!(d[0] > 0.0);
        assert!(m.decision_function(&x[1]).unwrap()[0] < 0.0);
        assert_eq!(m.predict(&x[0]).unwrap(), "A");
        assert_eq!(m.predict(&x[1]).unwrap(), "B");
    }

    #[test]
    fn one_hot_three_classes() {
        let x = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let m = train_ovr(&x, &["c", "a", "b"], &SvmParams::default()).unwrap();
        assert_eq!(m.classes(), ["a", "b", "c"]);
        assert_eq!(m.weights().len(), 3);
        assert_eq!(m.predict(&x[0]).unwrap(), "c");
        assert_eq!(m.predict(&x[1]).unwrap(), "a");
        assert_eq!(m.predict(&x[2]).unwrap(), "b");
    }

    #[test]
    fn degenerate_and_mismatch_errors() {
        let x = vec![vec![1.0], vec![2.0]];
        assert_eq!(train_ovr(&x, &["a", "a"], &SvmParams::default()), Err(Error::DegenerateLabels));
        let bad = vec![vec![1.0], vec![2.0, 3.0]];
        assert!(matches!(train_ovr(&bad, &["a", "b"], &SvmParams::default()), Err(Error::DimensionMismatch { .. })));
        let m = train_ovr(&x, &["a", "b"], &SvmParams::default()).unwrap();
        assert!(m.decision_function(&vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn zero_vector_gives_biases_and_linearity() {
        let x = vec![vec![1.0, 0.2], vec![-1.0, 0.1], vec![0.3, -2.0]];
        let m = train_ovr(&x, &["a", "b", "c"], &SvmParams::default()).unwrap();
        assert_eq!(m.decision_function(&vec![0.0, 0.0]).unwrap(), m.bias());
        let v = vec![0.7, -0.4];
        let v2: Vec<f64> = v.iter().map(|a| 2.0 * a).collect();
        let d1 = m.decision_function(&v).unwrap();
        let d2 = m.decision_function(&v2).unwrap();
        for k in 0..3 {
            assert!(((d2[k] - m.bias()[k]) - 2.0 * (d1[k] - m.bias()[k])).abs() < 1e-12);
        }
    }

    #[test]
    fn tie_goes_to_first_class() {
        let m = LinearOvrModel {
            classes: vec!["neg".into(), "pos".into()],
            weights: vec![vec![1.0], vec![1.0]],
            bias: vec![0.5, 0.5],
            feature_dim: 1,
        };
        assert_eq!(m.predict(&vec![3.0]).unwrap(), "neg");
    }

    #[test]
    fn sparse_input_trains() {
        let x = vec![
            SparseVector::from_pairs(4, vec![(0, 1.0)]).unwrap(),
            SparseVector::from_pairs(4, vec![(3, 1.0)]).unwrap(),
        ];
        let m = train_ovr(&x, &["x", "y"], &SvmParams::default()).unwrap();
        assert_eq!(m.predict(&x[1]).unwrap(), "y");
    }
}
