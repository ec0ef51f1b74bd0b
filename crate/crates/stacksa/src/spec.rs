//! Pipeline spec files (TOML).
//!
//! ```toml
//! language = "english"
//! models = ["TR", "TH", "FT"]
//! k = 5
//! seed = 1
//!
//! [resources]
//! lexicon = "lexicon.tsv"
//! embeddings = "vectors.txt"
//!
//! [evodag]
//! population_size = 100
//! early_stop_window = 4000
//! ```
//!
//! Resource paths are relative to the spec file. `seed` seeds the folds,
//! the SVMs and EvoDAG; seeds given inside `[svm]` or `[evodag]` are ignored.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use stacksa_core::evodag::EvoDagParams;
use stacksa_core::linmodel::SvmParams;
use stacksa_core::models::{
    build_emoji_model, build_embedding_model, build_ha_model, build_th_model, EmojiCorpus, FirstStageModel, ModelKind,
};
use stacksa_core::pipeline::PipelineBlueprint;
use stacksa_core::stacker::{StackConfig, DEFAULT_K};
use stacksa_core::textproc::{SuffixStemmer, TextModelConfig, TextPipeline, TextResources};

use crate::archive;
use crate::error::{Error, Result};
use crate::io;
use crate::presets;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resources {
    pub ha_corpus: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub emoji_corpus: Option<PathBuf>,
    /// A first-stage archive written by `emoji-build`; preferred over
    /// `emoji_corpus` when both are set.
    pub emoji_model: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub negations: Option<PathBuf>,
    pub entities: Option<PathBuf>,
    /// One suffix per line.
    pub stemmer_suffixes: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSpec {
    pub language: String,
    /// Replaces the language preset entirely.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<TextModelConfig>,
    pub models: Vec<String>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub resources: Resources,
    #[serde(default)]
    pub svm: SvmParams,
    #[serde(default)]
    pub evodag: EvoDagParams,
    /// Directory resource paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_k() -> usize {
    DEFAULT_K
}

pub const MIN_STEM: usize = 3;

impl PipelineSpec {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut spec: PipelineSpec = toml::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        spec.base_dir = base_dir.to_path_buf();
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&io::read_text(path)?, &base).map_err(|e| match e {
            Error::Spec(m) => Error::Spec(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn kinds(&self) -> Result<Vec<ModelKind>> {
        self.models.iter().map(|m| m.parse::<ModelKind>().map_err(|e| Error::Spec(e.to_string()))).collect()
    }

    /// TR enabled, every enabled kind backed by a resource, k ≥ 2.
    pub fn validate(&self) -> Result<()> {
        let kinds = self.kinds()?;
        if !kinds.contains(&ModelKind::Tr) {
            return Err(Error::Spec("the TR model must always be enabled".into()));
        }
        if self.k < 2 {
            return Err(Error::Spec("k must be at least 2".into()));
        }
        if self.text.is_none() && TextModelConfig::preset(&self.language).is_none() {
            return Err(Error::Spec(format!(
                "unknown language `{}` (known: {})",
                self.language,
                TextModelConfig::PRESET_NAMES.join(", ")
            )));
        }
        let r = &self.resources;
        for k in kinds {
            let missing = match k {
                ModelKind::Tr => None,
                ModelKind::Ha => r.ha_corpus.is_none().then_some("ha_corpus"),
                ModelKind::Th => r.lexicon.is_none().then_some("lexicon"),
                ModelKind::Emo => (r.emoji_corpus.is_none() && r.emoji_model.is_none()).then_some("emoji_model or emoji_corpus"),
                ModelKind::Ft => r.embeddings.is_none().then_some("embeddings"),
            };
            if let Some(field) = missing {
                return Err(Error::Resource { kind: k.name().into(), message: format!("no `{field}` in [resources]") });
            }
        }
        Ok(())
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn text_config(&self) -> Result<TextModelConfig> {
        match &self.text {
            Some(c) => Ok(c.clone()),
            None => presets::load(&self.language),
        }
    }

    pub fn text_pipeline(&self) -> Result<TextPipeline> {
        let r = &self.resources;
        let list = |p: &Option<PathBuf>| p.as_ref().map(|p| io::read_word_list(&self.resolve(p))).transpose();
        let stemmer = match &r.stemmer_suffixes {
            Some(p) => Some(SuffixStemmer::new(io::read_word_list(&self.resolve(p))?.into_iter().collect(), MIN_STEM)),
            None => None,
        };
        let resources = TextResources {
            stopwords: list(&r.stopwords)?,
            negations: list(&r.negations)?,
            entities: list(&r.entities)?,
            stemmer,
            ..TextResources::default()
        };
        Ok(TextPipeline::new(self.text_config()?, resources)?)
    }

    pub fn stack_config(&self) -> StackConfig {
        StackConfig {
            k: self.k,
            seed: self.seed,
            svm: SvmParams { seed: self.seed, ..self.svm },
            evodag: EvoDagParams { seed: self.seed, ..self.evodag.clone() },
        }
    }

    fn resource_error(kind: ModelKind, e: Error) -> Error {
        Error::Resource { kind: kind.name().into(), message: e.to_string() }
    }

    /// Loads every resource and builds the non-TR members.
    pub fn blueprint(&self) -> Result<PipelineBlueprint> {
        let pipeline = self.text_pipeline()?;
        let stack = self.stack_config();
        let kinds = self.kinds()?;
        let r = &self.resources;
        let mut prebuilt = BTreeMap::new();
        for &kind in &kinds {
            let built: Result<Option<FirstStageModel>> = (|| {
                Ok(match kind {
                    ModelKind::Tr => None,
                    ModelKind::Ha => {
                        let corpus = io::read_corpus(&self.resolve(r.ha_corpus.as_ref().expect("validated")))?;
                        Some(build_ha_model(&corpus, &pipeline, &stack.svm)?)
                    }
                    ModelKind::Th => {
                        let lex = io::read_lexicon(&self.resolve(r.lexicon.as_ref().expect("validated")), &pipeline)?;
                        Some(build_th_model(lex, &pipeline))
                    }
                    ModelKind::Emo => match (&r.emoji_model, &r.emoji_corpus) {
                        (Some(m), _) => {
                            let (_, model) = archive::load_first_stage(&self.resolve(m))?;
                            if model.kind() != ModelKind::Emo {
                                return Err(Error::Archive(format!("{} holds a {} model", m.display(), model.kind())));
                            }
                            Some(model)
                        }
                        (None, Some(c)) => {
                            let corpus = io::read_corpus(&self.resolve(c))?;
                            let ec = EmojiCorpus { class_counts: Vec::new(), corpus };
                            Some(build_emoji_model(&ec, &pipeline, &stack.svm)?)
                        }
                        (None, None) => unreachable!("validated"),
                    },
                    ModelKind::Ft => {
                        let table = io::read_embeddings(&self.resolve(r.embeddings.as_ref().expect("validated")))?;
                        Some(build_embedding_model(table))
                    }
                })
            })();
            if let Some(m) = built.map_err(|e| Self::resource_error(kind, e))? {
                prebuilt.insert(kind, m);
            }
        }
        Ok(PipelineBlueprint::new(pipeline, kinds, prebuilt, stack)?)
    }
}
