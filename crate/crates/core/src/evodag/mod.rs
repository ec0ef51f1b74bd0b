//! Steady-state genetic programming over dense feature vectors.
//!
//! Nodes are functions of earlier nodes with per-class coefficients fitted
//! by least squares against one-vs-rest targets. Offspring replace the loser
//! of a negative tournament; the run stops once the best validation score
//! has not improved for `early_stop_window` evaluations.

mod evolution;
pub mod function;
pub mod node;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

pub use evolution::{BestRecord, DagNode, Evolution, NodeId, Phase, StepOutcome, StopReason, MAX_RESAMPLE};
pub use function::{Function, FunctionSpec};
pub use node::{fit_params_ols, NodeOp, NodeOutputs, NodeParams};

use crate::corpus::encode_labels;
use crate::linmodel::argmax;
use crate::vector::DenseMatrix;
use crate::{Error, Result};
use node::{evaluate, ArgView};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvoDagParams {
    pub population_size: usize,
    pub tournament_size: usize,
    pub early_stop_window: usize,
    pub train_fraction: f64,
    pub seed: u64,
    /// Wall-clock limit in seconds (checked through a [`Clock`]).
    pub time_budget: Option<f64>,
    /// Hard cap on evaluations.
    pub max_evaluations: Option<usize>,
    pub function_set: Vec<FunctionSpec>,
}

impl Default for EvoDagParams {
    fn default() -> Self {
        Self {
            population_size: 100,
            tournament_size: 2,
            early_stop_window: 4000,
            train_fraction: 0.8,
            seed: 0,
            time_budget: None,
            max_evaluations: None,
            function_set: FunctionSpec::default_set(),
        }
    }
}

impl EvoDagParams {
    pub fn validate(&self) -> Result<()> {
        if self.tournament_size < 2 {
            return Err(Error::InvalidParameter("tournament size must be at least 2".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidParameter("train fraction must lie in (0, 1)".into()));
        }
        if self.function_set.is_empty() {
            return Err(Error::InvalidParameter("empty function set".into()));
        }
        if self.function_set.iter().any(|s| !s.function.is_unary() && s.arity < 2) {
            return Err(Error::InvalidParameter("multi-argument functions need arity of at least 2".into()));
        }
        if self.early_stop_window == 0 {
            return Err(Error::InvalidParameter("early stop window must be positive".into()));
        }
        Ok(())
    }
}

/// Elapsed-time source for the time budget.
pub trait Clock {
    fn elapsed_secs(&self) -> f64;
}

/// A clock that never advances; time budgets never fire.
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed_secs(&self) -> f64 {
        0.0
    }
}

#[cfg(feature = "std")]
pub struct StdClock(std::time::Instant);

#[cfg(feature = "std")]
impl StdClock {
    pub fn start() -> Self {
        Self(std::time::Instant::now())
    }
}

#[cfg(feature = "std")]
impl Clock for StdClock {
    fn elapsed_secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

#[cfg(feature = "std")]
fn default_clock() -> StdClock {
    StdClock::start()
}

#[cfg(not(feature = "std"))]
fn default_clock() -> NoClock {
    NoClock
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelNode {
    pub op: NodeOp,
    /// Indices into the model's node list.
    pub args: Vec<usize>,
    pub params: NodeParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionReport {
    pub evaluations: usize,
    pub best_evaluation: usize,
    pub best_validation: f64,
    pub skipped: usize,
    pub stop: StopReason,
}

/// The best node's sub-DAG; the root is the last node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvoDagModel {
    classes: Vec<String>,
    input_dim: usize,
    nodes: Vec<ModelNode>,
    report: EvolutionReport,
}

/// Evolves a classifier with the default clock.
pub fn evolve<S: AsRef<str>>(x: &DenseMatrix, y: &[S], params: &EvoDagParams) -> Result<EvoDagModel> {
    let mut classes: Vec<String> = y.iter().map(|s| String::from(s.as_ref())).collect();
    classes.sort();
    classes.dedup();
    let labels = encode_labels(y, &classes)?;
    evolve_encoded(x, &labels, classes, params)
}

pub fn evolve_encoded(x: &DenseMatrix, labels: &[usize], classes: Vec<String>, params: &EvoDagParams) -> Result<EvoDagModel> {
    evolve_with_clock(x, labels, classes, params, &default_clock())
}

pub fn evolve_with_clock(
    x: &DenseMatrix,
    labels: &[usize],
    classes: Vec<String>,
    params: &EvoDagParams,
    clock: &dyn Clock,
) -> Result<EvoDagModel> {
    let mut evo = Evolution::new(x, labels, classes, params.clone())?;
    let stop = evo.run(clock)?;
    log::debug!("evodag stopped ({stop:?}) after {} evaluations", evo.eval_counter());
    evo.best_model(stop)
}

impl EvoDagModel {
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn nodes(&self) -> &[ModelNode] {
        &self.nodes
    }

    pub fn report(&self) -> &EvolutionReport {
        &self.report
    }

    /// Per-row decision values, `[row][class]`.
    pub fn decision_matrix(&self, x: &DenseMatrix) -> Result<Vec<Vec<f64>>> {
        if x.cols() != self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, got: x.cols() });
        }
        let c = self.n_classes();
        let mut outputs: Vec<NodeOutputs> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let views: Vec<ArgView<'_>> = node
                .args
                .iter()
                .map(|&a| ArgView {
                    input: match self.nodes[a].op {
                        NodeOp::Input(j) => Some(j),
                        NodeOp::Apply(_) => None,
                    },
                    outputs: &outputs[a],
                })
                .collect();
            let out = evaluate(node.op, &node.params, &views, x, c);
            outputs.push(out);
        }
        let root = outputs.pop().ok_or_else(|| Error::Model("evodag".into(), "empty model".into()))?;
        Ok((0..x.rows()).map(|r| (0..c).map(|k| root[k][r]).collect()).collect())
    }

    pub fn decision_function(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, got: x.len() });
        }
        let m = DenseMatrix::from_rows(&[x.to_vec()])?;
        Ok(self.decision_matrix(&m)?.remove(0))
    }

    pub fn predict_index(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.decision_function(x)?))
    }

    pub fn predict(&self, x: &[f64]) -> Result<&str> {
        Ok(&self.classes[self.predict_index(x)?])
    }

    pub fn predict_matrix(&self, x: &DenseMatrix) -> Result<Vec<usize>> {
        Ok(self.decision_matrix(x)?.iter().map(|d| argmax(d)).collect())
    }

    /// One line per node: `n<i> = <function>(<args>) theta=[...]`.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let _ = write!(s, "n{i} = {}", op_label(node.op));
            if !node.args.is_empty() {
                let args: Vec<String> = node.args.iter().map(|a| format!("n{a}")).collect();
                let _ = write!(s, "({})", args.join(", "));
            }
            let _ = writeln!(s, " {}", params_label(&node.params));
        }
        s
    }

    /// Graphviz dot text; edges point from argument to consumer.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph evodag {\n  rankdir=BT;\n");
        let last = self.nodes.len().saturating_sub(1);
        for (i, node) in self.nodes.iter().enumerate() {
            let shape = match node.op {
                NodeOp::Input(_) => "box",
                NodeOp::Apply(_) if i == last => "doublecircle",
                NodeOp::Apply(_) => "ellipse",
            };
            let _ = writeln!(s, "  n{i} [label=\"{}\", shape={shape}];", op_label(node.op));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            for a in &node.args {
                let _ = writeln!(s, "  n{a} -> n{i};");
            }
        }
        s.push_str("}\n");
        s
    }

    /// FNV-1a over the full-precision description; equal fingerprints mean
    /// equal structure and coefficients.
    pub fn fingerprint(&self) -> u64 {
        let mut text = format!("{:?}|{}|", self.classes, self.input_dim);
        for node in &self.nodes {
            let _ = write!(text, "{:?}{:?}{:?};", node.op, node.args, node.params);
        }
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }
}

fn op_label(op: NodeOp) -> String {
    match op {
        NodeOp::Input(j) => format!("x{j}"),
        NodeOp::Apply(f) => String::from(f.name()),
    }
}

fn params_label(p: &NodeParams) -> String {
    match p {
        NodeParams::Scale(t) => format!("theta={t:?}"),
        NodeParams::Linear(t) => format!("theta={t:?}"),
        NodeParams::Centroid(_) => String::from("centroids"),
        NodeParams::Gaussian(_) => String::from("gaussian-nb"),
        NodeParams::Multinomial(_) => String::from("multinomial-nb"),
    }
}

/// Checks structural invariants of an exported model.
pub fn check_topology(model: &EvoDagModel) -> bool {
    model.nodes.iter().enumerate().all(|(i, n)| {
        n.args.iter().all(|&a| a < i)
            && match n.op {
                NodeOp::Input(j) => j < model.input_dim && n.args.is_empty(),
                NodeOp::Apply(f) => {
                    let mut sorted = n.args.clone();
                    sorted.sort_unstable();
                    let canonical = !f.commutative() || sorted == n.args;
                    let mut dedup = sorted.clone();
                    dedup.dedup();
                    canonical && (!f.unique_args() || dedup.len() == sorted.len()) && !n.args.is_empty()
                }
            }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separable() -> (DenseMatrix, Vec<usize>) {
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 } * (1.0 + i as f64 * 0.01), 0.3]).collect();
        let y = (0..40).map(|i| i % 2).collect();
        (DenseMatrix::from_rows(&rows).unwrap(), y)
    }

    fn small() -> EvoDagParams {
        EvoDagParams { population_size: 20, early_stop_window: 200, ..Default::default() }
    }

    #[test]
    fn separable_reaches_perfect_validation() {
        let (x, y) = separable();
        let m = evolve_encoded(&x, &y, vec!["a".into(), "b".into()], &small()).unwrap();
        assert_eq!(m.report().best_validation, 1.0);
        assert!(check_topology(&m));
        let r = m.report();
        assert!(r.evaluations - r.best_evaluation >= 200);
    }

    #[test]
    fn deterministic_fingerprint() {
        let (x, y) = separable();
        let c = vec![String::from("a"), String::from("b")];
        let a = evolve_encoded(&x, &y, c.clone(), &small()).unwrap();
        let b = evolve_encoded(&x, &y, c, &small()).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.decision_function(x.row(3)).unwrap(), a.decision_function(x.row(3)).unwrap());
    }

    #[test]
    fn population_too_small() {
        let (x, y) = separable();
        let p = EvoDagParams { population_size: 4, ..small() };
        assert!(evolve_encoded(&x, &y, vec!["a".into(), "b".into()], &p).is_err());
    }

    #[test]
    fn degenerate_labels() {
        let (x, _) = separable();
        let y = vec![0; 40];
        assert!(matches!(
            evolve_encoded(&x, &y, vec!["a".into(), "b".into()], &small()),
            Err(Error::DegenerateLabels)
        ));
    }

    #[test]
    fn dimension_checked() {
        let (x, y) = separable();
        let m = evolve_encoded(&x, &y, vec!["a".into(), "b".into()], &small()).unwrap();
        assert!(matches!(m.decision_function(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn single_input_model_is_scaled_value() {
        let m = EvoDagModel {
            classes: vec!["a".into(), "b".into()],
            input_dim: 2,
            nodes: vec![ModelNode { op: NodeOp::Input(1), args: vec![], params: NodeParams::Scale(vec![2.0, -1.0]) }],
            report: EvolutionReport { evaluations: 1, best_evaluation: 1, best_validation: 1.0, skipped: 0, stop: StopReason::EarlyStop },
        };
        assert_eq!(m.decision_function(&[5.0, 3.0]).unwrap(), vec![6.0, -3.0]);
        assert_eq!(m.predict(&[5.0, 3.0]).unwrap(), "a");
        assert!(m.describe().starts_with("n0 = x1"));
        assert!(m.to_dot().contains("digraph"));
    }
}
