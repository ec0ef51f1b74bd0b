//! Complete learners over labelled text: the stacked pipeline and the
//! plain TF-IDF + linear SVM baseline.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::Corpus;
use crate::linmodel::{train_ovr, SvmParams};
use crate::models::{build_tr_model, FirstStageModel, ModelKind};
use crate::stacker::{self, StackConfig, StackedModel};
use crate::textproc::{fit_tfidf, TextPipeline};
use crate::{Error, Result};

/// Something that can be trained on a corpus and label unseen texts.
pub trait TextLearner: Sync {
    fn name(&self) -> String;

    fn fit_predict(&self, train: &Corpus, test: &[&str]) -> Result<Vec<String>>;
}

/// Everything needed to fit a stacked model on a new training corpus. The
/// TR member is rebuilt from each training corpus; the other members do not
/// depend on it and are built once up front.
#[derive(Debug, Clone)]
pub struct PipelineBlueprint {
    pub pipeline: TextPipeline,
    pub kinds: Vec<ModelKind>,
    pub prebuilt: BTreeMap<ModelKind, FirstStageModel>,
    pub stack: StackConfig,
}

impl PipelineBlueprint {
    /// Checks that at least one kind is enabled and every kind other than
    /// TR has a model.
    pub fn new(
        pipeline: TextPipeline,
        kinds: Vec<ModelKind>,
        prebuilt: BTreeMap<ModelKind, FirstStageModel>,
        stack: StackConfig,
    ) -> Result<Self> {
        let bp = Self { pipeline, kinds: canonical_kinds(&kinds), prebuilt, stack };
        bp.check()?;
        Ok(bp)
    }

    fn check(&self) -> Result<()> {
        if self.kinds.is_empty() {
            return Err(Error::Config("no first-stage model enabled".into()));
        }
        for k in &self.kinds {
            match self.prebuilt.get(k) {
                Some(m) if m.kind() != *k => {
                    return Err(Error::Config(alloc::format!("model registered as {k} is a {}", m.kind())))
                }
                None if *k != ModelKind::Tr => {
                    return Err(Error::Model(k.name().into(), "no model or resource supplied".into()))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// The same blueprint restricted to `kinds`.
    pub fn with_kinds(&self, kinds: &[ModelKind]) -> Result<Self> {
        let bp = Self { kinds: canonical_kinds(kinds), ..self.clone() };
        bp.check()?;
        Ok(bp)
    }

    /// First-stage members for `train`, in canonical kind order.
    pub fn members(&self, train: &Corpus) -> Result<Vec<FirstStageModel>> {
        self.kinds
            .iter()
            .map(|k| match k {
                ModelKind::Tr => build_tr_model(&train.texts(), &self.pipeline),
                other => Ok(self.prebuilt[other].clone()),
            })
            .collect()
    }

    pub fn fit(&self, train: &Corpus) -> Result<StackedModel> {
        stacker::fit(self.members(train)?, train, &self.stack)
    }
}

/// Deduplicated, in the order TR, HA, TH, Emo, FT.
pub fn canonical_kinds(kinds: &[ModelKind]) -> Vec<ModelKind> {
    ModelKind::ALL.into_iter().filter(|k| kinds.contains(k)).collect()
}

impl TextLearner for PipelineBlueprint {
    fn name(&self) -> String {
        let names: Vec<&str> = self.kinds.iter().map(|k| k.name()).collect();
        alloc::format!("Stacked({})", names.join("+"))
    }

    fn fit_predict(&self, train: &Corpus, test: &[&str]) -> Result<Vec<String>> {
        let model = self.fit(train)?;
        Ok(model.predict_all(test).into_iter().map(String::from).collect())
    }
}

/// TF-IDF with a linear one-vs-rest SVM on top, no stacking.
#[derive(Debug, Clone)]
pub struct TfidfSvm {
    pub pipeline: TextPipeline,
    pub svm: SvmParams,
}

impl TextLearner for TfidfSvm {
    fn name(&self) -> String {
        String::from("B4MSA")
    }

    fn fit_predict(&self, train: &Corpus, test: &[&str]) -> Result<Vec<String>> {
        let texts = train.texts();
        let tfidf = fit_tfidf(&texts, &self.pipeline)?;
        let x: Vec<_> = texts.iter().map(|t| tfidf.vectorize(t)).collect();
        let clf = train_ovr(&x, &train.labels(), &self.svm)?;
        test.iter().map(|t| clf.predict(&tfidf.vectorize(t)).map(String::from)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_th_model, Lexicon};
    use crate::textproc::TextModelConfig;
    use alloc::vec;

    #[test]
    fn resources_checked() {
        let p = TextPipeline::from_config(TextModelConfig::english()).unwrap();
        let cfg = StackConfig::default();
        assert!(PipelineBlueprint::new(p.clone(), vec![], BTreeMap::new(), cfg.clone()).is_err());
        assert!(matches!(
            PipelineBlueprint::new(p.clone(), vec![ModelKind::Tr, ModelKind::Th], BTreeMap::new(), cfg.clone()),
            Err(Error::Model(..))
        ));
        let mut pre = BTreeMap::new();
        pre.insert(ModelKind::Th, build_th_model(Lexicon::new(["good"], ["bad"], &p).unwrap(), &p));
        let bp = PipelineBlueprint::new(p, vec![ModelKind::Th, ModelKind::Tr], pre, cfg).unwrap();
        assert_eq!(bp.kinds, vec![ModelKind::Tr, ModelKind::Th]);
        assert_eq!(bp.name(), "Stacked(TR+TH)");
    }
}
