//! Node semantics shared by training and prediction.
//!
//! A node's output is one column of values per class (`[class][row]`).
//! Arithmetic nodes act class-wise on their arguments' columns and are
//! scaled by per-class coefficients fitted with least squares against
//! one-vs-rest ±1 targets. Classifier nodes read a feature vector per row:
//! the raw input value for input arguments, all class columns otherwise.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::function::{unary, Function};
use crate::classic::{GaussianNb, MultinomialNb, NearestCentroid};
use crate::linalg::ridge_least_squares;
use crate::vector::DenseMatrix;

/// `[class][row]`
pub type NodeOutputs = Vec<Vec<f64>>;

pub const RIDGE_JITTER: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeOp {
    Input(usize),
    Apply(Function),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NodeParams {
    /// One coefficient per class: `θ_k · f(args_k)`.
    Scale(Vec<f64>),
    /// Per class, one coefficient per argument: `Σ_i θ_{k,i} arg_{i,k}`.
    Linear(Vec<Vec<f64>>),
    Centroid(NearestCentroid),
    Gaussian(GaussianNb),
    Multinomial(MultinomialNb),
}

/// An argument as seen by a node being evaluated.
#[derive(Clone, Copy)]
pub struct ArgView<'a> {
    /// Set when the argument is an input node.
    pub input: Option<usize>,
    pub outputs: &'a NodeOutputs,
}

/// Per-class least squares: `design[k]` holds the columns for class `k`,
/// `targets[k]` the ±1 target. `None` on non-finite data.
pub fn fit_params_ols(design: &[Vec<Vec<f64>>], targets: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    design
        .iter()
        .zip(targets)
        .map(|(cols, t)| {
            let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
            ridge_least_squares(&refs, t, RIDGE_JITTER)
        })
        .collect()
}

/// Unscaled per-class columns of an arithmetic node: for `Add` one column
/// per argument, otherwise the single column `f(args)`.
pub(crate) fn raw_columns(op: NodeOp, args: &[ArgView<'_>], x: &DenseMatrix, n_classes: usize) -> Vec<Vec<Vec<f64>>> {
    let rows = x.rows();
    match op {
        NodeOp::Input(j) => {
            let col = x.column(j);
            vec![vec![col]; n_classes]
        }
        NodeOp::Apply(Function::Add) => (0..n_classes)
            .map(|k| args.iter().map(|a| a.outputs[k].clone()).collect())
            .collect(),
        NodeOp::Apply(f) => (0..n_classes)
            .map(|k| {
                let col: Vec<f64> = (0..rows)
                    .map(|r| {
                        let mut vals = args.iter().map(|a| a.outputs[k][r]);
                        match f {
                            Function::Mul => vals.product(),
                            Function::Max => vals.fold(f64::NEG_INFINITY, f64::max),
                            Function::Min => vals.fold(f64::INFINITY, f64::min),
                            Function::Hypot => libm::sqrt(vals.map(|v| v * v).sum::<f64>()),
                            _ => unary(f, vals.next().expect("unary node has one argument")),
                        }
                    })
                    .collect();
                vec![col]
            })
            .collect(),
    }
}

/// Feature matrix for a classifier node.
pub(crate) fn classifier_features(args: &[ArgView<'_>], x: &DenseMatrix, n_classes: usize) -> DenseMatrix {
    let width: usize = args.iter().map(|a| if a.input.is_some() { 1 } else { n_classes }).sum();
    let mut m = DenseMatrix::zeros(x.rows(), width);
    for r in 0..x.rows() {
        let row = m.row_mut(r);
        let mut j = 0;
        for a in args {
            match a.input {
                Some(i) => {
                    row[j] = x.get(r, i);
                    j += 1;
                }
                None => {
                    for k in 0..n_classes {
                        row[j] = a.outputs[k][r];
                        j += 1;
                    }
                }
            }
        }
    }
    m
}

/// Applies fitted parameters to rows of `x`.
pub(crate) fn evaluate(op: NodeOp, params: &NodeParams, args: &[ArgView<'_>], x: &DenseMatrix, n_classes: usize) -> NodeOutputs {
    match params {
        NodeParams::Centroid(m) => classify(args, x, n_classes, |row| m.decision(row)),
        NodeParams::Gaussian(m) => classify(args, x, n_classes, |row| m.decision(row)),
        NodeParams::Multinomial(m) => classify(args, x, n_classes, |row| m.decision(row)),
        NodeParams::Scale(theta) => raw_columns(op, args, x, n_classes)
            .into_iter()
            .zip(theta)
            .map(|(cols, t)| cols[0].iter().map(|v| t * v).collect())
            .collect(),
        NodeParams::Linear(theta) => raw_columns(op, args, x, n_classes)
            .into_iter()
            .zip(theta)
            .map(|(cols, t)| {
                (0..x.rows()).map(|r| cols.iter().zip(t).map(|(c, w)| c[r] * w).sum()).collect()
            })
            .collect(),
    }
}

fn classify(args: &[ArgView<'_>], x: &DenseMatrix, n_classes: usize, decide: impl Fn(&[f64]) -> Vec<f64>) -> NodeOutputs {
    let feats = classifier_features(args, x, n_classes);
    let mut out = vec![Vec::with_capacity(x.rows()); n_classes];
    for row in feats.iter_rows() {
        for (k, v) in decide(row).into_iter().enumerate() {
            out[k].push(v);
        }
    }
    out
}
