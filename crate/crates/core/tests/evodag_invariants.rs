#![allow(clippy::needless_range_loop)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stacksa_core::evodag::{
    check_topology, evolve_encoded, Evolution, EvoDagParams, Function, NoClock, NodeOp, NodeParams, StepOutcome,
    StopReason,
};
use stacksa_core::DenseMatrix;

fn blobs(n: usize, seed: u64) -> (DenseMatrix, Vec<usize>) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let centers = [[0.0, 0.0, 1.0], [2.0, 1.0, -1.0], [-1.0, 2.5, 0.5]];
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for i in 0..n {
        let c = i % 3;
        rows.push(centers[c].iter().map(|m| m + r.gen_range(-1.2..1.2)).collect::<Vec<f64>>());
        y.push(c);
    }
    (DenseMatrix::from_rows(&rows).unwrap(), y)
}

fn classes() -> Vec<String> {
    ["a", "b", "c"].iter().map(|s| s.to_string()).collect()
}

fn small_params(seed: u64) -> EvoDagParams {
    EvoDagParams { population_size: 20, early_stop_window: 150, seed, ..Default::default() }
}

fn train_column(values: &[f64], rows: &[usize]) -> Vec<f64> {
    rows.iter().map(|&r| values[r]).collect()
}

#[test]
fn population_and_argument_invariants_hold_every_step() {
    let (x, y) = blobs(90, 1);
    let mut evo = Evolution::new(&x, &y, classes(), small_params(1)).unwrap();
    evo.init_population().unwrap();
    let size = evo.population().len();
    assert_eq!(size, 20);
    let mut last_best = f64::NEG_INFINITY;
    for _ in 0..400 {
        let before = evo.eval_counter();
        if let StepOutcome::Inserted { node, replaced } = evo.step() {
            assert_ne!(node, replaced);
            let n = evo.node(node).unwrap();
            if let NodeOp::Apply(f) = n.op {
                assert!(!n.args.is_empty() && n.args.len() <= f.default_arity().max(2));
                if f.commutative() {
                    assert!(n.args.windows(2).all(|w| w[0] <= w[1]), "{f} args not ordered");
                }
                if f.unique_args() {
                    assert!(n.args.windows(2).all(|w| w[0] != w[1]), "{f} repeats an argument");
                }
                assert!(n.args.iter().all(|&a| a < node), "arguments must predate the node");
            }
        }
        assert_eq!(evo.eval_counter(), before + 1);
        assert_eq!(evo.population().len(), size);
        let best = *evo.best_history().last().unwrap();
        assert!(best >= last_best);
        last_best = best;
    }
}

#[test]
fn coefficients_match_independent_least_squares() {
    let (x, y) = blobs(60, 2);
    let mut evo = Evolution::new(&x, &y, classes(), small_params(2)).unwrap();
    evo.init_population().unwrap();
    let train = evo.train_rows().to_vec();
    let mut checked_add = 0;
    let mut checked_input = 0;
    for &id in evo.population() {
        let node = evo.node(id).unwrap();
        if let (NodeOp::Input(j), NodeParams::Scale(theta)) = (node.op, &node.params) {
            let col = train_column(&x.column(j), &train);
            for k in 0..3 {
                let t = &evo.targets()[k];
                let num: f64 = col.iter().zip(t).map(|(a, b)| a * b).sum();
                let den: f64 = col.iter().map(|a| a * a).sum::<f64>() + 1e-9;
                assert!((theta[k] - num / den).abs() <= 1e-9 * (num / den).abs().max(1.0));
            }
            checked_input += 1;
        }
    }
    for _ in 0..300 {
        let Some(id) = evo.sample_offspring(evo.phase()) else { continue };
        let node = evo.node(id).unwrap().clone();
        if let (NodeOp::Apply(Function::Add), NodeParams::Linear(theta)) = (&node.op, &node.params) {
            for k in 0..3 {
                let cols: Vec<Vec<f64>> =
                    node.args.iter().map(|&a| train_column(&evo.outputs(a).unwrap()[k], &train)).collect();
                let a = DMatrix::from_fn(train.len(), cols.len(), |i, j| cols[j][i]);
                let t = DVector::from_vec(evo.targets()[k].clone());
                let gram = a.transpose() * &a + DMatrix::identity(cols.len(), cols.len()) * 1e-9;
                let oracle = gram.cholesky().unwrap().solve(&(a.transpose() * &t));
                let ours = DVector::from_vec(theta[k].clone());
                // arguments are often near-collinear, so compare the objective
                let objective = |w: &DVector<f64>| (&a * w - &t).norm_squared() + 1e-9 * w.norm_squared();
                let (o, r) = (objective(&ours), objective(&oracle));
                assert!(o <= r * (1.0 + 1e-6) + 1e-9, "class {k}: objective {o} vs oracle {r}");
            }
            checked_add += 1;
        }
        evo.replace_with(id);
    }
    assert!(checked_add > 0, "no Add offspring was produced");
    assert!(checked_input > 0);
}

#[test]
fn early_stop_fires_exactly_after_window() {
    let (x, y) = blobs(60, 3);
    let params = small_params(3);
    let mut evo = Evolution::new(&x, &y, classes(), params.clone()).unwrap();
    let stop = evo.run(&NoClock).unwrap();
    assert_eq!(stop, StopReason::EarlyStop);
    let best = evo.best().unwrap();
    assert_eq!(evo.eval_counter() - best.evaluation, params.early_stop_window);
}

#[test]
fn max_evaluations_caps_the_run() {
    let (x, y) = blobs(60, 4);
    let params = EvoDagParams { max_evaluations: Some(70), early_stop_window: 100_000, ..small_params(4) };
    let model = evolve_encoded(&x, &y, classes(), &params).unwrap();
    assert_eq!(model.report().stop, StopReason::MaxEvaluations);
    assert_eq!(model.report().evaluations, 70);
}

#[test]
fn exported_model_is_a_closed_dag_and_reproduces_validation() {
    let (x, y) = blobs(90, 5);
    for seed in 0..3 {
        let model = evolve_encoded(&x, &y, classes(), &small_params(seed)).unwrap();
        assert!(check_topology(&model));
        assert_eq!(model.input_dim(), 3);
        let pred = model.predict_matrix(&x).unwrap();
        assert_eq!(pred.len(), 90);
        let accuracy = pred.iter().zip(&y).filter(|(a, b)| a == b).count() as f64 / 90.0;
        assert!(accuracy > 0.7, "seed {seed}: accuracy {accuracy}");
    }
}
