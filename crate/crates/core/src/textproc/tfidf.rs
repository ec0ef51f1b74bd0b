use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::TextPipeline;
use crate::vector::SparseVector;
use crate::{Error, Result};

/// Vocabulary (sorted family-tagged token keys) with smoothed idf weights:
/// `idf(t) = ln((1 + N) / (1 + df(t))) + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    pipeline: TextPipeline,
    vocabulary: Vec<String>,
    idf: Vec<f64>,
    num_docs: usize,
}

pub fn fit_tfidf<S: AsRef<str>>(corpus: &[S], pipeline: &TextPipeline) -> Result<TfidfModel> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in corpus {
        let keys: BTreeSet<String> = pipeline.tokens(doc.as_ref()).tokens.iter().map(|t| t.key()).collect();
        for k in keys {
            *df.entry(k).or_insert(0) += 1;
        }
    }
    let n = corpus.len() as f64;
    let (vocabulary, idf) = df
        .into_iter()
        .map(|(k, d)| (k, libm::log((1.0 + n) / (1.0 + d as f64)) + 1.0))
        .unzip();
    Ok(TfidfModel { pipeline: pipeline.clone(), vocabulary, idf, num_docs: corpus.len() })
}

impl TfidfModel {
    pub fn pipeline(&self) -> &TextPipeline {
        &self.pipeline
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.vocabulary.binary_search_by(|v| v.as_str().cmp(key)).ok()
    }

    /// Raw-count tf times idf, L2-normalized. Out-of-vocabulary tokens are
    /// dropped; an all-OOV text maps to the zero vector.
    pub fn vectorize(&self, text: &str) -> SparseVector {
        let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
        for tok in self.pipeline.tokens(text).tokens {
            if let Some(i) = self.index_of(&tok.key()) {
                *counts.entry(i as u32).or_insert(0.0) += 1.0;
            }
        }
        let pairs: Vec<(u32, f64)> = counts.into_iter().map(|(i, tf)| (i, tf * self.idf[i as usize])).collect();
        let mut v = SparseVector::from_pairs(self.vocabulary.len(), pairs).expect("indices come from the vocabulary");
        let norm = v.norm();
        if norm > 0.0 {
            v.scale(1.0 / norm);
        }
        v
    }
}
