//! Two-step configuration search.
//!
//! Step one tries every non-empty combination of the candidate tokenizers;
//! step two flips each two-valued normalization parameter in turn, keeping a
//! change whenever it scores better. The loop repeats until an iteration ends
//! on the configuration it started from. Candidates are ranked by
//! `(k-fold score desc, vocabulary size asc, canonical key asc)`, a strict
//! total order, so every accepted change is a strict improvement and the
//! loop terminates.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{fit_tfidf, Handling, HashtagHandling, ListHandling, TextModelConfig, TextPipeline, TextResources};
use crate::corpus::{encode_labels, Corpus};
use crate::eval::Metric;
use crate::folds::{fold_indices, stratified_folds};
use crate::linmodel::{train_ovr_encoded, SvmParams};
use crate::vector::SparseVector;
use crate::{Error, Result};

/// Normalization parameters the second step toggles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Toggle {
    RemoveDiacritics,
    RemoveDuplicates,
    RemovePunctuation,
    Lowercase,
    Emoticons,
    Numbers,
    Urls,
    Users,
    Hashtags,
    Entities,
    Negation,
    Stopwords,
    Stemming,
}

impl Toggle {
    pub const ALL: [Toggle; 13] = [
        Toggle::RemoveDiacritics,
        Toggle::RemoveDuplicates,
        Toggle::RemovePunctuation,
        Toggle::Lowercase,
        Toggle::Emoticons,
        Toggle::Numbers,
        Toggle::Urls,
        Toggle::Users,
        Toggle::Hashtags,
        Toggle::Entities,
        Toggle::Negation,
        Toggle::Stopwords,
        Toggle::Stemming,
    ];

    /// The two values tried for this parameter.
    pub fn alternatives(self, base: &TextModelConfig) -> [TextModelConfig; 2] {
        let with = |f: &dyn Fn(&mut TextModelConfig)| {
            let mut c = base.clone();
            f(&mut c);
            c
        };
        let handling = |set: fn(&mut TextModelConfig, Handling)| {
            [with(&|c| set(c, Handling::Group)), with(&|c| set(c, Handling::Delete))]
        };
        match self {
            Toggle::RemoveDiacritics => [with(&|c| c.remove_diacritics = false), with(&|c| c.remove_diacritics = true)],
            Toggle::RemoveDuplicates => [with(&|c| c.remove_duplicates = false), with(&|c| c.remove_duplicates = true)],
            Toggle::RemovePunctuation => [with(&|c| c.remove_punctuation = false), with(&|c| c.remove_punctuation = true)],
            Toggle::Lowercase => [with(&|c| c.lowercase = false), with(&|c| c.lowercase = true)],
            Toggle::Emoticons => handling(|c, h| c.emoticons = h),
            Toggle::Numbers => handling(|c, h| c.numbers = h),
            Toggle::Urls => handling(|c, h| c.urls = h),
            Toggle::Users => handling(|c, h| c.users = h),
            Toggle::Hashtags => [with(&|c| c.hashtags = HashtagHandling::Group), with(&|c| c.hashtags = HashtagHandling::Delete)],
            Toggle::Entities => [with(&|c| c.entities = ListHandling::None), with(&|c| c.entities = ListHandling::Delete)],
            Toggle::Negation => [with(&|c| c.negation = false), with(&|c| c.negation = true)],
            Toggle::Stopwords => [with(&|c| c.stopwords = ListHandling::None), with(&|c| c.stopwords = ListHandling::Delete)],
            Toggle::Stemming => [with(&|c| c.stemming = false), with(&|c| c.stemming = true)],
        }
    }
}

/// Candidate tokenizers and toggles, plus the starting configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchGrid {
    pub start: TextModelConfig,
    pub nwords: Vec<usize>,
    pub skipgrams: Vec<(usize, usize)>,
    pub qgrams: Vec<usize>,
    pub toggles: Vec<Toggle>,
}

impl SearchGrid {
    /// n-words {1,2,3}, skip-grams {(3,1),(2,2),(2,1)}, q-grams {2..6} and
    /// every toggle.
    pub fn full(start: TextModelConfig) -> Self {
        Self {
            start,
            nwords: alloc::vec![1, 2, 3],
            skipgrams: alloc::vec![(3, 1), (2, 2), (2, 1)],
            qgrams: alloc::vec![2, 3, 4, 5, 6],
            toggles: Toggle::ALL.to_vec(),
        }
    }

    /// Every non-empty tokenizer combination applied to `base`.
    fn tokenizer_combinations(&self, base: &TextModelConfig) -> Vec<TextModelConfig> {
        #[derive(Clone, Copy)]
        enum Cand {
            N(usize),
            S((usize, usize)),
            Q(usize),
        }
        let cands: Vec<Cand> = self
            .nwords
            .iter()
            .map(|&n| Cand::N(n))
            .chain(self.skipgrams.iter().map(|&s| Cand::S(s)))
            .chain(self.qgrams.iter().map(|&q| Cand::Q(q)))
            .collect();
        assert!(cands.len() < 32, "tokenizer grid too large");
        (1u32..(1 << cands.len()))
            .map(|mask| {
                let mut c = base.clone();
                c.nwords.clear();
                c.skipgrams.clear();
                c.qgrams.clear();
                for (i, cand) in cands.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        match *cand {
                            Cand::N(n) => c.nwords.push(n),
                            Cand::S(s) => c.skipgrams.push(s),
                            Cand::Q(q) => c.qgrams.push(q),
                        }
                    }
                }
                c.canonicalize();
                c
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub config: TextModelConfig,
    pub score: f64,
    pub vocabulary_size: usize,
    /// Completed loop iterations, including the final confirming one.
    pub iterations: usize,
    /// Distinct configurations scored.
    pub evaluated: usize,
}

#[derive(Debug, Clone)]
struct Scored {
    config: TextModelConfig,
    key: String,
    score: f64,
    vocab: usize,
}

/// `Less` when `a` ranks ahead of `b`.
fn rank(a: &Scored, b: &Scored) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.vocab.cmp(&b.vocab))
        .then_with(|| a.key.cmp(&b.key))
}

struct Evaluator<'a> {
    texts: Vec<&'a str>,
    labels: Vec<usize>,
    classes: Vec<String>,
    splits: Vec<(Vec<usize>, Vec<usize>)>,
    metric: &'a Metric,
    svm: SvmParams,
    resources: &'a TextResources,
    cache: BTreeMap<String, Option<Scored>>,
}

impl Evaluator<'_> {
    /// `None` for configurations that cannot be built (e.g. a toggle that
    /// needs a word list the resources lack).
    fn score(&mut self, mut config: TextModelConfig) -> Result<Option<Scored>> {
        config.canonicalize();
        let key = config.canonical_key();
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let scored = match TextPipeline::new(config.clone(), self.resources.clone()) {
            Err(Error::Config(_)) => None,
            Err(e) => return Err(e),
            Ok(pipeline) => {
                let mut total = 0.0;
                for (train, test) in &self.splits {
                    let train_texts: Vec<&str> = train.iter().map(|&i| self.texts[i]).collect();
                    let tfidf = fit_tfidf(&train_texts, &pipeline)?;
                    let xs: Vec<SparseVector> = train_texts.iter().map(|t| tfidf.vectorize(t)).collect();
                    let ys: Vec<usize> = train.iter().map(|&i| self.labels[i]).collect();
                    let model = train_ovr_encoded(&xs, &ys, self.classes.clone(), &self.svm)?;
                    let mut truth = Vec::with_capacity(test.len());
                    let mut pred = Vec::with_capacity(test.len());
                    for &i in test {
                        truth.push(self.classes[self.labels[i]].as_str());
                        pred.push(self.classes[model.predict_index(&tfidf.vectorize(self.texts[i]))?].as_str());
                    }
                    total += self.metric.score(&truth, &pred)?;
                }
                let vocab = fit_tfidf(&self.texts, &pipeline)?.vocabulary_size();
                Some(Scored { config, key: key.clone(), score: total / self.splits.len() as f64, vocab })
            }
        };
        self.cache.insert(key, scored.clone());
        Ok(scored)
    }
}

/// Searches the grid with k-fold scoring of a TF-IDF + linear SVM model.
pub fn parameter_search(
    corpus: &Corpus,
    grid: &SearchGrid,
    resources: &TextResources,
    k: usize,
    metric: &Metric,
    seed: u64,
) -> Result<SearchOutcome> {
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    let classes = corpus.classes();
    if classes.len() < 2 {
        return Err(Error::DegenerateLabels);
    }
    let labels = encode_labels(&corpus.labels(), &classes)?;
    let folds = stratified_folds(&labels, classes.len(), k, seed)?;
    let mut eval = Evaluator {
        texts: corpus.texts(),
        labels,
        classes,
        splits: fold_indices(&folds, k),
        metric,
        svm: SvmParams { seed, ..SvmParams::default() },
        resources,
        cache: BTreeMap::new(),
    };

    let mut current = eval
        .score(grid.start.clone())?
        .ok_or_else(|| Error::Config("starting configuration cannot be built with the given resources".into()))?;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let start_key = current.key.clone();
        for cand in grid.tokenizer_combinations(&current.config) {
            if let Some(s) = eval.score(cand)? {
                if rank(&s, &current) == Ordering::Less {
                    current = s;
                }
            }
        }
        for toggle in &grid.toggles {
            for cand in toggle.alternatives(&current.config) {
                if let Some(s) = eval.score(cand)? {
                    if rank(&s, &current) == Ordering::Less {
                        current = s;
                    }
                }
            }
        }
        if current.key == start_key {
            break;
        }
    }
    Ok(SearchOutcome {
        config: current.config,
        score: current.score,
        vocabulary_size: current.vocab,
        iterations,
        evaluated: eval.cache.len(),
    })
}
