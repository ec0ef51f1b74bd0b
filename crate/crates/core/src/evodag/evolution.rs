use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::function::{Function, FunctionSpec};
use super::node::{classifier_features, fit_params_ols, raw_columns, ArgView, NodeOp, NodeOutputs, NodeParams};
use super::{Clock, EvoDagModel, EvoDagParams, ModelNode};
use crate::classic::{GaussianNb, MultinomialNb, NearestCentroid};
use crate::eval::metrics::balanced_accuracy;
use crate::folds::{rng, stratified_split};
use crate::linmodel::argmax;
use crate::vector::DenseMatrix;
use crate::{Error, Result};

/// Attempts at building a finite offspring before it is skipped.
pub const MAX_RESAMPLE: usize = 5;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct DagNode {
    pub id: NodeId,
    pub op: NodeOp,
    pub args: Vec<NodeId>,
    pub params: NodeParams,
    /// Macro-recall on the internal training rows.
    pub fitness: f64,
    /// Macro-recall on the validation rows.
    pub validation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestRecord {
    pub node: NodeId,
    pub score: f64,
    /// Value of the evaluation counter when this node was created.
    pub evaluation: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Arguments drawn uniformly from the population.
    First,
    /// Arguments drawn by tournament on fitness.
    Later,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    EarlyStop,
    MaxEvaluations,
    TimeBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Inserted { node: NodeId, replaced: NodeId },
    Skipped,
}

struct Slot {
    node: DagNode,
    /// Present while the node is a population member.
    outputs: Option<NodeOutputs>,
    /// Population membership + child references + best marker.
    refs: usize,
}

/// Steady-state evolution state. [`super::evolve`] drives it to completion;
/// the step-wise methods are public so runs can be inspected.
pub struct Evolution<'a> {
    x: &'a DenseMatrix,
    labels: Vec<usize>,
    classes: Vec<String>,
    train: Vec<usize>,
    valid: Vec<usize>,
    targets: Vec<Vec<f64>>,
    train_labels: Vec<usize>,
    params: EvoDagParams,
    rng: ChaCha8Rng,
    slots: Vec<Option<Slot>>,
    population: Vec<NodeId>,
    eval_counter: usize,
    offspring: usize,
    skipped: usize,
    best: Option<BestRecord>,
    best_history: Vec<f64>,
}

impl<'a> Evolution<'a> {
    pub fn new(x: &'a DenseMatrix, labels: &[usize], classes: Vec<String>, params: EvoDagParams) -> Result<Self> {
        params.validate()?;
        if x.rows() != labels.len() {
            return Err(Error::LengthMismatch { left: x.rows(), right: labels.len() });
        }
        if x.rows() < 10 {
            return Err(Error::InvalidParameter("at least 10 training rows are required".into()));
        }
        if x.cols() == 0 {
            return Err(Error::EmptyInput);
        }
        if x.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite input value".into()));
        }
        let n_classes = classes.len();
        if labels.iter().any(|&l| l >= n_classes) {
            return Err(Error::InvalidParameter("label index out of range".into()));
        }
        let mut seen = vec![false; n_classes];
        labels.iter().for_each(|&l| seen[l] = true);
        if seen.iter().filter(|&&s| s).count() < 2 {
            return Err(Error::DegenerateLabels);
        }
        if params.population_size < x.cols() + 3 {
            return Err(Error::InvalidParameter(alloc::format!(
                "population size {} too small for {} inputs (need at least {})",
                params.population_size,
                x.cols(),
                x.cols() + 3
            )));
        }
        let (train, valid) = stratified_split(labels, n_classes, params.train_fraction, params.seed);
        let train_labels: Vec<usize> = train.iter().map(|&r| labels[r]).collect();
        let targets = (0..n_classes)
            .map(|k| train_labels.iter().map(|&l| if l == k { 1.0 } else { -1.0 }).collect())
            .collect();
        let rng = rng(params.seed);
        Ok(Self {
            x,
            labels: labels.to_vec(),
            classes,
            train,
            valid,
            targets,
            train_labels,
            params,
            rng,
            slots: Vec::new(),
            population: Vec::new(),
            eval_counter: 0,
            offspring: 0,
            skipped: 0,
            best: None,
            best_history: Vec::new(),
        })
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn params(&self) -> &EvoDagParams {
        &self.params
    }

    pub fn population(&self) -> &[NodeId] {
        &self.population
    }

    pub fn node(&self, id: NodeId) -> Option<&DagNode> {
        self.slots.get(id)?.as_ref().map(|s| &s.node)
    }

    /// Outputs over all rows, available while the node is in the population.
    pub fn outputs(&self, id: NodeId) -> Option<&NodeOutputs> {
        self.slots.get(id)?.as_ref()?.outputs.as_ref()
    }

    pub fn train_rows(&self) -> &[usize] {
        &self.train
    }

    pub fn validation_rows(&self) -> &[usize] {
        &self.valid
    }

    /// ±1 one-vs-rest targets over the training rows, `[class][train row]`.
    pub fn targets(&self) -> &[Vec<f64>] {
        &self.targets
    }

    pub fn inputs(&self) -> &DenseMatrix {
        self.x
    }

    pub fn eval_counter(&self) -> usize {
        self.eval_counter
    }

    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn best(&self) -> Option<BestRecord> {
        self.best
    }

    /// Best validation score after every evaluation.
    pub fn best_history(&self) -> &[f64] {
        &self.best_history
    }

    pub fn live_nodes(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn phase(&self) -> Phase {
        if self.offspring < self.params.population_size {
            Phase::First
        } else {
            Phase::Later
        }
    }

    fn arg_view(&self, id: NodeId) -> ArgView<'_> {
        let slot = self.slots[id].as_ref().expect("argument is alive");
        let input = match slot.node.op {
            NodeOp::Input(j) => Some(j),
            NodeOp::Apply(_) => None,
        };
        ArgView { input, outputs: slot.outputs.as_ref().expect("argument is a population member") }
    }

    fn restrict(&self, col: &[f64]) -> Vec<f64> {
        self.train.iter().map(|&r| col[r]).collect()
    }

    /// Fits a node and computes its outputs; `None` if anything is non-finite.
    fn build(&self, op: NodeOp, args: &[NodeId]) -> Option<(NodeParams, NodeOutputs)> {
        let views: Vec<ArgView<'_>> = args.iter().map(|&a| self.arg_view(a)).collect();
        let c = self.n_classes();
        let (params, outputs) = match op {
            NodeOp::Apply(f) if f.is_classifier() => {
                let feats = classifier_features(&views, self.x, c);
                let train_feats = feats.select_rows(&self.train);
                let params = match f {
                    Function::NearestCentroid => {
                        NodeParams::Centroid(NearestCentroid::fit(&train_feats, &self.train_labels, c).ok()?)
                    }
                    Function::GaussianNb => {
                        NodeParams::Gaussian(GaussianNb::fit(&train_feats, &self.train_labels, c).ok()?)
                    }
                    _ => NodeParams::Multinomial(MultinomialNb::fit(&train_feats, &self.train_labels, c).ok()?),
                };
                let mut out = vec![Vec::with_capacity(self.x.rows()); c];
                for row in feats.iter_rows() {
                    let d = match &params {
                        NodeParams::Centroid(m) => m.decision(row),
                        NodeParams::Gaussian(m) => m.decision(row),
                        NodeParams::Multinomial(m) => m.decision(row),
                        _ => unreachable!(),
                    };
                    for (k, v) in d.into_iter().enumerate() {
                        out[k].push(v);
                    }
                }
                (params, out)
            }
            _ => {
                let raw = raw_columns(op, &views, self.x, c);
                let design: Vec<Vec<Vec<f64>>> =
                    raw.iter().map(|cols| cols.iter().map(|col| self.restrict(col)).collect()).collect();
                let theta = fit_params_ols(&design, &self.targets)?;
                let out: NodeOutputs = raw
                    .iter()
                    .zip(&theta)
                    .map(|(cols, t)| {
                        (0..self.x.rows()).map(|r| cols.iter().zip(t).map(|(col, w)| col[r] * w).sum()).collect()
                    })
                    .collect();
                let params = if matches!(op, NodeOp::Apply(Function::Add)) {
                    NodeParams::Linear(theta)
                } else {
                    NodeParams::Scale(theta.into_iter().map(|t| t[0]).collect())
                };
                (params, out)
            }
        };
        if outputs.iter().flatten().any(|v| !v.is_finite()) {
            return None;
        }
        Some((params, outputs))
    }

    fn score_rows(&self, outputs: &NodeOutputs, rows: &[usize]) -> f64 {
        let mut col = vec![0.0; self.n_classes()];
        let pred: Vec<usize> = rows
            .iter()
            .map(|&r| {
                for (k, c) in col.iter_mut().enumerate() {
                    *c = outputs[k][r];
                }
                argmax(&col)
            })
            .collect();
        let truth: Vec<usize> = rows.iter().map(|&r| self.labels[r]).collect();
        balanced_accuracy(&truth, &pred, self.n_classes())
    }

    /// Builds, scores and registers a node (not yet a population member).
    fn create(&mut self, op: NodeOp, mut args: Vec<NodeId>) -> Option<NodeId> {
        if let NodeOp::Apply(f) = op {
            if f.commutative() {
                args.sort_unstable();
            }
        }
        let (params, outputs) = self.build(op, &args)?;
        let fitness = self.score_rows(&outputs, &self.train);
        let validation = self.score_rows(&outputs, &self.valid);
        let id = self.slots.len();
        for &a in &args {
            self.slots[a].as_mut().expect("argument is alive").refs += 1;
        }
        self.slots.push(Some(Slot {
            node: DagNode { id, op, args, params, fitness, validation },
            outputs: Some(outputs),
            refs: 0,
        }));
        Some(id)
    }

    fn retain(&mut self, id: NodeId) {
        self.slots[id].as_mut().expect("node is alive").refs += 1;
    }

    fn release(&mut self, id: NodeId) {
        let mut stack = vec![id];
        while let Some(id) = stack.pop() {
            let slot = self.slots[id].as_mut().expect("node is alive");
            slot.refs -= 1;
            if slot.refs == 0 {
                let slot = self.slots[id].take().expect("node is alive");
                stack.extend(slot.node.args);
            }
        }
    }

    fn leave_population(&mut self, id: NodeId) {
        if let Some(slot) = self.slots[id].as_mut() {
            slot.outputs = None;
        }
        self.release(id);
    }

    /// Counts one evaluation and updates the best-so-far record.
    fn record_evaluation(&mut self, created: Option<NodeId>) {
        self.eval_counter += 1;
        if let Some(id) = created {
            let score = self.slots[id].as_ref().expect("fresh node").node.validation;
            if self.best.is_none_or(|b| score > b.score) {
                self.retain(id);
                if let Some(old) = self.best.replace(BestRecord { node: id, score, evaluation: self.eval_counter }) {
                    self.release(old.node);
                }
            }
        }
        self.best_history.push(self.best.map_or(f64::NEG_INFINITY, |b| b.score));
    }

    fn push_member(&mut self, id: NodeId) {
        self.retain(id);
        self.population.push(id);
    }

    fn random_spec(&mut self) -> FunctionSpec {
        *self.params.function_set.choose(&mut self.rng).expect("function set is not empty")
    }

    /// Initial population: one scaled input per feature, the three
    /// classifier nodes over all inputs, functions over not-yet-used inputs
    /// until every input is used, then functions over the population.
    pub fn init_population(&mut self) -> Result<()> {
        if !self.population.is_empty() {
            return Ok(());
        }
        let d = self.x.cols();
        let cap = self.params.population_size;
        let mut inputs = Vec::with_capacity(d);
        for j in 0..d {
            let id = self.create(NodeOp::Input(j), Vec::new());
            self.record_evaluation(id);
            let id = id.ok_or_else(|| Error::Model("evodag".into(), alloc::format!("input {j} produced non-finite values")))?;
            self.push_member(id);
            inputs.push(id);
        }
        for f in [Function::NearestCentroid, Function::GaussianNb, Function::MultinomialNb] {
            let id = self.create(NodeOp::Apply(f), inputs.clone());
            self.record_evaluation(id);
            if let Some(id) = id {
                self.push_member(id);
            }
        }
        let mut failures = 0;
        let max_failures = 50 * cap;
        let mut unused = inputs.clone();
        unused.shuffle(&mut self.rng);
        while !unused.is_empty() && self.population.len() < cap {
            let spec = self.random_spec();
            let mut args: Vec<NodeId> = if spec.function.is_unary() {
                vec![unused.pop().expect("non-empty")]
            } else {
                let n = spec.arity.min(unused.len()).max(1);
                unused.split_off(unused.len() - n)
            };
            if args.len() == 1 && !spec.function.is_unary() {
                let others: Vec<NodeId> = inputs.iter().copied().filter(|&i| i != args[0]).collect();
                match others.choose(&mut self.rng) {
                    Some(&o) => args.push(o),
                    None => args.push(args[0]),
                }
            }
            let id = self.create(NodeOp::Apply(spec.function), args.clone());
            self.record_evaluation(id);
            match id {
                Some(id) => self.push_member(id),
                None => {
                    failures += 1;
                    if failures > max_failures {
                        return Err(Error::Model("evodag".into(), "could not build the initial population".into()));
                    }
                    args.retain(|a| inputs.contains(a) && !unused.contains(a));
                    unused.extend(args);
                    unused.sort_unstable();
                    unused.dedup();
                    unused.shuffle(&mut self.rng);
                }
            }
        }
        while self.population.len() < cap {
            let spec = self.random_spec();
            let args = self.select_args(&spec, Phase::First);
            let id = self.create(NodeOp::Apply(spec.function), args);
            self.record_evaluation(id);
            match id {
                Some(id) => self.push_member(id),
                None => {
                    failures += 1;
                    if failures > max_failures {
                        return Err(Error::Model("evodag".into(), "could not build the initial population".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Population position winning a tournament among `candidates`
    /// (positions); `negative` picks the worst instead.
    fn tournament(&mut self, candidates: &[usize], negative: bool) -> usize {
        let t = self.params.tournament_size.min(candidates.len());
        let picks = sample(&mut self.rng, candidates.len(), t);
        let mut winner = candidates[picks.index(0)];
        for i in 1..t {
            let pos = candidates[picks.index(i)];
            let (fw, fp) = (self.fitness_at(winner), self.fitness_at(pos));
            if (!negative && fp > fw) || (negative && fp < fw) {
                winner = pos;
            }
        }
        winner
    }

    fn fitness_at(&self, pos: usize) -> f64 {
        self.slots[self.population[pos]].as_ref().expect("member is alive").node.fitness
    }

    fn select_args(&mut self, spec: &FunctionSpec, phase: Phase) -> Vec<NodeId> {
        let pool = self.population.len();
        let arity = spec.effective_arity(pool);
        let positions: Vec<usize> = if spec.unique_args() {
            match phase {
                Phase::First => sample(&mut self.rng, pool, arity.min(pool)).into_vec(),
                Phase::Later => {
                    let mut remaining: Vec<usize> = (0..pool).collect();
                    let mut chosen = Vec::with_capacity(arity);
                    while chosen.len() < arity && !remaining.is_empty() {
                        let w = self.tournament(&remaining, false);
                        remaining.retain(|&p| p != w);
                        chosen.push(w);
                    }
                    chosen
                }
            }
        } else {
            let all: Vec<usize> = (0..pool).collect();
            (0..arity)
                .map(|_| match phase {
                    Phase::First => self.rng.gen_range(0..pool),
                    Phase::Later => self.tournament(&all, false),
                })
                .collect()
        };
        positions.into_iter().map(|p| self.population[p]).collect()
    }

    /// Builds one offspring with up to [`MAX_RESAMPLE`] attempts. The node is
    /// registered but not inserted; pass it to [`Self::replace_with`].
    /// Counts as one evaluation either way.
    pub fn sample_offspring(&mut self, phase: Phase) -> Option<NodeId> {
        let mut created = None;
        for _ in 0..MAX_RESAMPLE {
            let spec = self.random_spec();
            let args = self.select_args(&spec, phase);
            if let Some(id) = self.create(NodeOp::Apply(spec.function), args) {
                created = Some(id);
                break;
            }
        }
        self.offspring += 1;
        if created.is_none() {
            self.skipped += 1;
        }
        self.record_evaluation(created);
        created
    }

    /// Inserts `id` in place of the loser of a negative tournament.
    pub fn replace_with(&mut self, id: NodeId) -> NodeId {
        let all: Vec<usize> = (0..self.population.len()).collect();
        let pos = self.tournament(&all, true);
        let old = core::mem::replace(&mut self.population[pos], id);
        self.retain(id);
        self.leave_population(old);
        old
    }

    pub fn step(&mut self) -> StepOutcome {
        let phase = self.phase();
        match self.sample_offspring(phase) {
            Some(node) => {
                let replaced = self.replace_with(node);
                StepOutcome::Inserted { node, replaced }
            }
            None => StepOutcome::Skipped,
        }
    }

    fn should_stop(&self, clock: &dyn Clock) -> Option<StopReason> {
        if let Some(max) = self.params.max_evaluations {
            if self.eval_counter >= max {
                return Some(StopReason::MaxEvaluations);
            }
        }
        if let Some(best) = self.best {
            if self.eval_counter - best.evaluation >= self.params.early_stop_window {
                return Some(StopReason::EarlyStop);
            }
        }
        if let Some(budget) = self.params.time_budget {
            if clock.elapsed_secs() >= budget {
                return Some(StopReason::TimeBudget);
            }
        }
        None
    }

    pub fn run(&mut self, clock: &dyn Clock) -> Result<StopReason> {
        self.init_population()?;
        loop {
            if let Some(reason) = self.should_stop(clock) {
                return Ok(reason);
            }
            self.step();
        }
    }

    /// The best node's reachable sub-DAG, in creation (topological) order.
    pub fn best_model(&self, stop: StopReason) -> Result<EvoDagModel> {
        let best = self.best.ok_or_else(|| Error::Model("evodag".into(), "no node was evaluated".into()))?;
        let mut reachable = Vec::new();
        let mut stack = vec![best.node];
        let mut seen = vec![false; self.slots.len()];
        while let Some(id) = stack.pop() {
            if seen[id] {
                continue;
            }
            seen[id] = true;
            reachable.push(id);
            stack.extend(self.slots[id].as_ref().expect("reachable nodes are alive").node.args.iter().copied());
        }
        reachable.sort_unstable();
        let local = |id: NodeId| reachable.binary_search(&id).expect("argument is reachable");
        let nodes = reachable
            .iter()
            .map(|&id| {
                let n = &self.slots[id].as_ref().expect("alive").node;
                ModelNode { op: n.op, args: n.args.iter().map(|&a| local(a)).collect(), params: n.params.clone() }
            })
            .collect();
        Ok(EvoDagModel {
            classes: self.classes.clone(),
            input_dim: self.x.cols(),
            nodes,
            report: super::EvolutionReport {
                evaluations: self.eval_counter,
                best_evaluation: best.evaluation,
                best_validation: best.score,
                skipped: self.skipped,
                stop,
            },
        })
    }
}
