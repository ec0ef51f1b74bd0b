//! First-stage models: each turns a text into a fixed-width vector.

pub mod embedding;
pub mod emoji;
pub mod lexicon;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

pub use embedding::EmbeddingTable;
pub use emoji::{prepare_emoji_corpus, EmojiCorpus};
pub use lexicon::Lexicon;

use crate::corpus::Corpus;
use crate::linmodel::{train_ovr, LinearOvrModel, SvmParams};
use crate::textproc::{fit_tfidf, TextPipeline, TfidfModel};
use crate::vector::FeatureVec;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// TF-IDF over the task's own training set.
    Tr,
    /// Classifier trained on an independent human-annotated corpus.
    Ha,
    /// Positive/negative lexicon counts.
    Th,
    /// Emoji-prediction decision values.
    Emo,
    /// Mean word embedding.
    Ft,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [ModelKind::Tr, ModelKind::Ha, ModelKind::Th, ModelKind::Emo, ModelKind::Ft];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Tr => "TR",
            ModelKind::Ha => "HA",
            ModelKind::Th => "TH",
            ModelKind::Emo => "Emo",
            ModelKind::Ft => "FT",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown model kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FirstStageModel {
    Tr(TfidfModel),
    Ha { tfidf: TfidfModel, classifier: LinearOvrModel },
    Th { pipeline: TextPipeline, lexicon: Lexicon },
    Emo { tfidf: TfidfModel, classifier: LinearOvrModel },
    Ft(EmbeddingTable),
}

impl FirstStageModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            FirstStageModel::Tr(_) => ModelKind::Tr,
            FirstStageModel::Ha { .. } => ModelKind::Ha,
            FirstStageModel::Th { .. } => ModelKind::Th,
            FirstStageModel::Emo { .. } => ModelKind::Emo,
            FirstStageModel::Ft(_) => ModelKind::Ft,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            FirstStageModel::Tr(t) => t.vocabulary_size(),
            FirstStageModel::Ha { classifier, .. } | FirstStageModel::Emo { classifier, .. } => classifier.n_classes(),
            FirstStageModel::Th { .. } => 2,
            FirstStageModel::Ft(t) => t.width(),
        }
    }

    /// Class names behind the coordinates of the HA and Emo models.
    pub fn output_classes(&self) -> Option<&[String]> {
        match self {
            FirstStageModel::Ha { classifier, .. } | FirstStageModel::Emo { classifier, .. } => {
                Some(classifier.classes())
            }
            _ => None,
        }
    }

    pub fn transform(&self, text: &str) -> FeatureVec {
        match self {
            FirstStageModel::Tr(t) => FeatureVec::Sparse(t.vectorize(text)),
            FirstStageModel::Ha { tfidf, classifier } | FirstStageModel::Emo { tfidf, classifier } => {
                let v = tfidf.vectorize(text);
                FeatureVec::Dense(classifier.decision_function(&v).expect("dimensions fixed at build time"))
            }
            FirstStageModel::Th { pipeline, lexicon } => FeatureVec::Dense(lexicon.score(text, pipeline).to_vec()),
            FirstStageModel::Ft(t) => FeatureVec::Dense(t.sentence_vector(text)),
        }
    }

    pub fn transform_all<S: AsRef<str>>(&self, texts: &[S]) -> Vec<FeatureVec> {
        texts.iter().map(|t| self.transform(t.as_ref())).collect()
    }
}

pub fn build_tr_model<S: AsRef<str>>(texts: &[S], pipeline: &TextPipeline) -> Result<FirstStageModel> {
    Ok(FirstStageModel::Tr(fit_tfidf(texts, pipeline)?))
}

fn tfidf_classifier(corpus: &Corpus, pipeline: &TextPipeline, svm: &SvmParams) -> Result<(TfidfModel, LinearOvrModel)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if corpus.classes().len() < 2 {
        return Err(Error::DegenerateLabels);
    }
    let texts = corpus.texts();
    let tfidf = fit_tfidf(&texts, pipeline)?;
    let x: Vec<_> = texts.iter().map(|t| tfidf.vectorize(t)).collect();
    let classifier = train_ovr(&x, &corpus.labels(), svm)?;
    Ok((tfidf, classifier))
}

pub fn build_ha_model(corpus: &Corpus, pipeline: &TextPipeline, svm: &SvmParams) -> Result<FirstStageModel> {
    let (tfidf, classifier) = tfidf_classifier(corpus, pipeline, svm)?;
    Ok(FirstStageModel::Ha { tfidf, classifier })
}

pub fn build_th_model(lexicon: Lexicon, pipeline: &TextPipeline) -> FirstStageModel {
    FirstStageModel::Th { pipeline: pipeline.clone(), lexicon }
}

pub fn build_emoji_model(corpus: &EmojiCorpus, pipeline: &TextPipeline, svm: &SvmParams) -> Result<FirstStageModel> {
    let (tfidf, classifier) = tfidf_classifier(&corpus.corpus, pipeline, svm)?;
    Ok(FirstStageModel::Emo { tfidf, classifier })
}

pub fn build_embedding_model(table: EmbeddingTable) -> FirstStageModel {
    FirstStageModel::Ft(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::LabeledDocument;
    use crate::linmodel::argmax;
    use crate::textproc::TextModelConfig;
    use alloc::vec;

    fn pipeline() -> TextPipeline {
        TextPipeline::from_config(TextModelConfig::english()).unwrap()
    }

    fn ha() -> Corpus {
        [
            ("what a lovely day", "positive"),
            ("i love this", "positive"),
            ("terrible awful mess", "negative"),
            ("i hate this", "negative"),
            ("the bus leaves at noon", "neutral"),
            ("the meeting is on monday", "neutral"),
        ]
        .into_iter()
        .map(|(t, k)| LabeledDocument::new(t, k))
        .collect()
    }

    #[test]
    fn dimensions() {
        let p = pipeline();
        let tr = build_tr_model(&["a b c", "c d"], &p).unwrap();
        assert_eq!(tr.output_dim(), tr.transform("a").to_dense().len());
        let ha = build_ha_model(&ha(), &p, &SvmParams::default()).unwrap();
        assert_eq!(ha.output_dim(), 3);
        assert_eq!(ha.transform("x").to_dense().len(), 3);
        let th = build_th_model(Lexicon::new(["good"], ["bad"], &p).unwrap(), &p);
        assert_eq!(th.output_dim(), 2);
        let ft = build_embedding_model(EmbeddingTable::new(4, vec![("a".into(), vec![1.0; 4])]).unwrap());
        assert_eq!(ft.output_dim(), 4);
        assert_eq!(ft.transform("a").to_dense(), vec![1.0; 4]);
    }

    #[test]
    fn ha_memorizes_training_text() {
        let p = pipeline();
        let ha = build_ha_model(&ha(), &p, &SvmParams::default()).unwrap();
        let d = ha.transform("i love this").to_dense();
        let classes = ha.output_classes().unwrap();
        assert_eq!(classes[argmax(&d)], "positive");
        assert_eq!(d, ha.transform("i love this").to_dense());
    }

    #[test]
    fn degenerate_ha_rejected() {
        let c: Corpus = [LabeledDocument::new("a", "x"), LabeledDocument::new("b", "x")].into_iter().collect();
        assert!(matches!(build_ha_model(&c, &pipeline(), &SvmParams::default()), Err(Error::DegenerateLabels)));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
        }
    }
}
