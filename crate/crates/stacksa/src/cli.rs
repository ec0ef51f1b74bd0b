//! Command-line surface.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stacksa_core::eval::{ablation_study, kfold_evaluate, AblationDataset, AblationReport, AblationStrategy, Metric};
use stacksa_core::models::{build_emoji_model, prepare_emoji_corpus, EmojiCorpus};
use stacksa_core::textproc::TextPipeline;

use crate::archive;
use crate::io;
use crate::parallel::{self, RayonRunner};
use crate::presets;
use crate::spec::PipelineSpec;

#[derive(Debug, Parser)]
#[command(name = "stacksa", version, about = "Stacked text classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a stacked model and write an archive.
    Train {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Label texts with a trained archive.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score an archive on a labelled file, or cross-validate a spec on it.
    Evaluate {
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        model: Option<PathBuf>,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        test: PathBuf,
        #[arg(long, default_value = "macro-f1")]
        metric: String,
        /// JSONL score rows; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score subsets of the spec's models with k-fold cross-validation.
    Ablate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        train: PathBuf,
        #[arg(long, value_enum, default_value = "bottom-up")]
        strategy: StrategyArg,
        #[arg(long, default_value = "macro-f1")]
        metric: String,
        /// JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an emoji-labelled corpus from raw texts.
    EmojiPrepare {
        #[arg(long)]
        raw: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 50_000)]
        max_per_class: usize,
        #[arg(long, default_value_t = 64)]
        classes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Train the emoji first-stage model and write it as an archive.
    EmojiBuild {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "default")]
        language: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the evolved second-stage graph.
    Dag {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: DagFormat,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    BottomUp,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DagFormat {
    Text,
    Dot,
}

#[derive(Serialize)]
struct Prediction<'a> {
    text: &'a str,
    klass: &'a str,
    decision: Vec<f64>,
}

#[derive(Serialize)]
pub struct ScoreRow {
    pub dataset: String,
    pub system: String,
    pub fold: Option<usize>,
    pub metric: String,
    pub score: f64,
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Train { train, spec, out: archive_path } => {
            let spec = PipelineSpec::load(&spec)?;
            let corpus = io::read_corpus(&train)?;
            let blueprint = spec.blueprint()?;
            let (model, _) = parallel::fit_blueprint(&blueprint, &corpus).context("training failed")?;
            let meta = archive::save_stacked(&archive_path, &model, Some(&spec))?;
            let r = model.second_stage().report();
            writeln!(
                out,
                "members={} classes={} folds={} width={} evaluations={} best_validation={:.4} stop={:?} checksum={}",
                model.members().len(),
                model.classes().len(),
                model.k(),
                model.feature_width(),
                r.evaluations,
                r.best_validation,
                r.stop,
                meta.checksum
            )?;
        }
        Command::Predict { model, input, out: preds } => {
            let (_, model) = archive::load_stacked(&model)?;
            let rows = io::read_rows(&input)?;
            let preds_rows: Vec<Prediction<'_>> = rows
                .iter()
                .map(|r| {
                    let (klass, decision) = model.predict(&r.text);
                    Prediction { text: &r.text, klass, decision }
                })
                .collect();
            io::write_atomic(&preds, io::to_jsonl(&preds_rows).as_bytes())?;
            writeln!(out, "predicted {} rows", preds_rows.len())?;
        }
        Command::Evaluate { model, spec, test, metric, out: scores_path } => {
            let metric: Metric = metric.parse()?;
            let corpus = io::read_corpus(&test)?;
            let mut rows = Vec::new();
            if let Some(model_path) = model {
                let (_, model) = archive::load_stacked(&model_path)?;
                let pred = model.predict_all(&corpus.texts());
                let score = metric.score(&corpus.labels(), &pred)?;
                writeln!(out, "{metric} {score:.6}")?;
                rows.push(ScoreRow { dataset: stem(&test), system: stem(&model_path), fold: None, metric: metric.name(), score });
            } else {
                let spec_path = spec.expect("clap requires --model or --spec");
                let spec = PipelineSpec::load(&spec_path)?;
                let blueprint = spec.blueprint()?;
                let scores = kfold_evaluate(&blueprint, &corpus, spec.k, &metric, spec.seed)?;
                for (i, s) in scores.scores.iter().enumerate() {
                    rows.push(ScoreRow { dataset: stem(&test), system: stem(&spec_path), fold: Some(i), metric: metric.name(), score: *s });
                }
                writeln!(out, "{metric} {:.6} (mean of {} folds)", scores.mean, spec.k)?;
            }
            let jsonl = io::to_jsonl(&rows);
            match scores_path {
                Some(p) => io::write_atomic(&p, jsonl.as_bytes())?,
                None => out.write_all(jsonl.as_bytes())?,
            }
        }
        Command::Ablate { spec, train, strategy, metric, out: report_path } => {
            let metric: Metric = metric.parse()?;
            let spec = PipelineSpec::load(&spec)?;
            let corpus = io::read_corpus(&train)?;
            let blueprint = spec.blueprint()?;
            let kinds = blueprint.kinds.clone();
            let strategy = match strategy {
                StrategyArg::BottomUp => AblationStrategy::BottomUp,
                StrategyArg::Exhaustive => AblationStrategy::Exhaustive,
            };
            let datasets = [AblationDataset { name: stem(&train), corpus, blueprint }];
            let report = ablation_study(&datasets, &kinds, spec.k, &metric, strategy, spec.seed, &RayonRunner::new())?;
            write_ablation_table(out, &report, &metric)?;
            if let Some(p) = report_path {
                io::write_atomic(&p, serde_json::to_string_pretty(&report)?.as_bytes())?;
            }
        }
        Command::EmojiPrepare { raw, out: corpus_path, max_per_class, classes, seed } => {
            let texts = io::read_raw_texts(&raw)?;
            let corpus = prepare_emoji_corpus(&texts, max_per_class, classes, seed);
            io::write_atomic(&corpus_path, io::to_jsonl(&corpus.corpus.docs).as_bytes())?;
            writeln!(out, "kept {} of {} texts in {} classes", corpus.corpus.len(), texts.len(), corpus.class_counts.len())?;
            for (emoji, n) in &corpus.class_counts {
                writeln!(out, "{emoji}\t{n}")?;
            }
        }
        Command::EmojiBuild { corpus, language, out: model_path, seed } => {
            let docs = io::read_corpus(&corpus)?;
            let pipeline = TextPipeline::from_config(presets::load(&language)?)?;
            let svm = stacksa_core::linmodel::SvmParams { seed, ..Default::default() };
            let model = build_emoji_model(&EmojiCorpus { corpus: docs, class_counts: Vec::new() }, &pipeline, &svm)?;
            let meta = archive::save_first_stage(&model_path, &model)?;
            writeln!(out, "emoji model with {} classes, checksum={}", meta.feature_width, meta.checksum)?;
        }
        Command::Dag { model, format } => {
            let (_, model) = archive::load_stacked(&model)?;
            let dag = model.second_stage();
            match format {
                DagFormat::Text => write!(out, "{}", dag.describe())?,
                DagFormat::Dot => write!(out, "{}", dag.to_dot())?,
            }
        }
    }
    Ok(())
}

fn write_ablation_table(out: &mut dyn Write, report: &AblationReport, metric: &Metric) -> Result<()> {
    if report.subsets.is_empty() {
        bail!("ablation produced no results");
    }
    writeln!(out, "{:<24} {:>10} {:>6}", "models", metric.name(), "rank")?;
    for s in &report.subsets {
        let mean = s.fold_scores.iter().map(|f| f.mean).sum::<f64>() / s.fold_scores.len() as f64;
        let rank = s.ranks.iter().sum::<f64>() / s.ranks.len() as f64;
        writeln!(out, "{:<24} {:>10.4} {:>6.1}", s.label(), mean, rank)?;
    }
    writeln!(out, "evaluated {} subsets", report.evaluations())?;
    Ok(())
}
