//! Language-independent text normalization, tokenization and TF-IDF.

mod normalize;
mod search;
mod tfidf;
mod tokenize;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use normalize::{normalize, EmoticonTable, Polarity, SuffixStemmer};
pub use search::{parameter_search, SearchGrid, SearchOutcome, Toggle};
pub use tfidf::{fit_tfidf, TfidfModel};
pub use tokenize::{tokenize, Token, TokenBag, TokenFamily};

use crate::{Error, Result};

/// Treatment of a recognized span (emoticons, numbers, urls, users).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handling {
    Keep,
    Group,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HashtagHandling {
    /// No special treatment; same output as `Keep`.
    None,
    Keep,
    Group,
    Delete,
}

/// Treatment of words found in a user-supplied list (entities, stopwords).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ListHandling {
    None,
    Delete,
    Group,
}

/// Every normalization flag and tokenizer set of a text model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextModelConfig {
    pub remove_diacritics: bool,
    pub remove_duplicates: bool,
    pub remove_punctuation: bool,
    pub lowercase: bool,
    pub emoticons: Handling,
    pub numbers: Handling,
    pub urls: Handling,
    pub users: Handling,
    pub hashtags: HashtagHandling,
    pub entities: ListHandling,
    pub negation: bool,
    pub stopwords: ListHandling,
    pub stemming: bool,
    pub nwords: Vec<usize>,
    /// `(words, skip)` pairs.
    pub skipgrams: Vec<(usize, usize)>,
    pub qgrams: Vec<usize>,
}

impl TextModelConfig {
    /// English column; also the value every blank cell of the other
    /// presets inherits.
    pub fn english() -> Self {
        Self {
            remove_diacritics: false,
            remove_duplicates: true,
            remove_punctuation: true,
            lowercase: true,
            emoticons: Handling::Group,
            numbers: Handling::Delete,
            urls: Handling::Group,
            users: Handling::Group,
            hashtags: HashtagHandling::None,
            entities: ListHandling::None,
            negation: false,
            stopwords: ListHandling::None,
            stemming: false,
            nwords: vec_of(&[1, 2]),
            skipgrams: alloc::vec![(3, 1)],
            qgrams: vec_of(&[3, 4]),
        }
    }

    pub fn default_preset() -> Self {
        Self {
            remove_diacritics: true,
            numbers: Handling::Group,
            skipgrams: Vec::new(),
            qgrams: vec_of(&[2, 3, 4]),
            ..Self::english()
        }
    }

    pub fn arabic() -> Self {
        Self {
            remove_diacritics: true,
            numbers: Handling::Group,
            entities: ListHandling::Delete,
            stopwords: ListHandling::Delete,
            nwords: vec_of(&[1]),
            skipgrams: Vec::new(),
            qgrams: vec_of(&[2, 3, 4]),
            ..Self::english()
        }
    }

    pub fn spanish() -> Self {
        Self {
            remove_diacritics: true,
            numbers: Handling::Group,
            nwords: vec_of(&[1]),
            skipgrams: alloc::vec![(2, 1)],
            qgrams: vec_of(&[2, 3, 4, 5, 6]),
            ..Self::english()
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default_preset()),
            "arabic" | "ar" => Some(Self::arabic()),
            "english" | "en" => Some(Self::english()),
            "spanish" | "es" => Some(Self::spanish()),
            _ => None,
        }
    }

    pub const PRESET_NAMES: [&'static str; 4] = ["default", "arabic", "english", "spanish"];

    pub fn validate(&self) -> Result<()> {
        if self.nwords.contains(&0) {
            return Err(Error::Config("n-word sizes must be >= 1".into()));
        }
        if self.qgrams.contains(&0) {
            return Err(Error::Config("q-gram sizes must be >= 1".into()));
        }
        if self.skipgrams.iter().any(|&(a, b)| a < 2 || b < 1) {
            return Err(Error::Config("skip-grams need words >= 2 and skip >= 1".into()));
        }
        if !self.has_tokenizer() {
            return Err(Error::Config("at least one tokenizer set must be non-empty".into()));
        }
        Ok(())
    }

    pub fn has_tokenizer(&self) -> bool {
        !(self.nwords.is_empty() && self.skipgrams.is_empty() && self.qgrams.is_empty())
    }

    /// Sorts and deduplicates the tokenizer sets.
    pub fn canonicalize(&mut self) {
        self.nwords.sort_unstable();
        self.nwords.dedup();
        self.skipgrams.sort_unstable();
        self.skipgrams.dedup();
        self.qgrams.sort_unstable();
        self.qgrams.dedup();
    }

    /// Stable textual encoding, used as a tie-break key and for memoization.
    pub fn canonical_key(&self) -> String {
        let mut c = self.clone();
        c.canonicalize();
        let mut s = String::new();
        let _ = write!(
            s,
            "diac={};dup={};punc={};lc={};emo={:?};num={:?};url={:?};usr={:?};tag={:?};ent={:?};neg={};sw={:?};stem={};nw={:?};sg={:?};qg={:?}",
            c.remove_diacritics as u8,
            c.remove_duplicates as u8,
            c.remove_punctuation as u8,
            c.lowercase as u8,
            c.emoticons,
            c.numbers,
            c.urls,
            c.users,
            c.hashtags,
            c.entities,
            c.negation as u8,
            c.stopwords,
            c.stemming as u8,
            c.nwords,
            c.skipgrams,
            c.qgrams
        );
        s
    }
}

impl Default for TextModelConfig {
    fn default() -> Self {
        Self::default_preset()
    }
}

fn vec_of(v: &[usize]) -> Vec<usize> {
    v.to_vec()
}

/// Word lists and tables the normalizer consults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextResources {
    pub emoticons: EmoticonTable,
    pub stopwords: Option<BTreeSet<String>>,
    pub entities: Option<BTreeSet<String>>,
    pub negations: Option<BTreeSet<String>>,
    pub stemmer: Option<SuffixStemmer>,
}

impl Default for TextResources {
    fn default() -> Self {
        Self { emoticons: EmoticonTable::bundled(), stopwords: None, entities: None, negations: None, stemmer: None }
    }
}

/// A validated config together with the resources it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextPipeline {
    config: TextModelConfig,
    resources: TextResources,
}

impl TextPipeline {
    /// Validates the config and checks every list the enabled steps need.
    /// Stopword and negation lists are normalized with the character-level
    /// steps so they match normalized text.
    pub fn new(mut config: TextModelConfig, mut resources: TextResources) -> Result<Self> {
        config.validate()?;
        config.canonicalize();
        if config.stopwords != ListHandling::None && resources.stopwords.is_none() {
            return Err(Error::Config("stopword handling enabled but no stopword list supplied".into()));
        }
        if config.negation && resources.negations.is_none() {
            return Err(Error::Config("negation enabled but no negation word list supplied".into()));
        }
        if config.stemming && resources.stemmer.is_none() {
            return Err(Error::Config("stemming enabled but no stemmer supplied".into()));
        }
        let fold = |set: &mut Option<BTreeSet<String>>| {
            if let Some(words) = set.take() {
                *set = Some(
                    words
                        .iter()
                        .map(|w| normalize::normalize_word(w, &config))
                        .filter(|w| !w.is_empty())
                        .collect(),
                );
            }
        };
        fold(&mut resources.stopwords);
        fold(&mut resources.negations);
        Ok(Self { config, resources })
    }

    /// Pipeline over the bundled resources.
    pub fn from_config(config: TextModelConfig) -> Result<Self> {
        Self::new(config, TextResources::default())
    }

    pub fn config(&self) -> &TextModelConfig {
        &self.config
    }

    pub fn resources(&self) -> &TextResources {
        &self.resources
    }

    pub fn normalize(&self, text: &str) -> String {
        normalize::normalize_with(text, &self.config, &self.resources)
    }

    /// Normalizes and tokenizes.
    pub fn tokens(&self, text: &str) -> TokenBag {
        tokenize(&self.normalize(text), &self.config)
    }

    /// Applies the character-level steps to a single dictionary word.
    pub fn normalize_word(&self, word: &str) -> String {
        normalize::normalize_word(word, &self.config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in TextModelConfig::PRESET_NAMES {
            TextModelConfig::preset(name).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn preset_values_follow_table() {
        let en = TextModelConfig::english();
        assert!(!en.remove_diacritics);
        assert_eq!(en.numbers, Handling::Delete);
        assert_eq!(en.skipgrams, alloc::vec![(3, 1)]);
        let ar = TextModelConfig::arabic();
        assert_eq!(ar.entities, ListHandling::Delete);
        assert_eq!(ar.stopwords, ListHandling::Delete);
        assert_eq!(ar.nwords, alloc::vec![1]);
        let es = TextModelConfig::spanish();
        assert_eq!(es.qgrams, alloc::vec![2, 3, 4, 5, 6]);
        assert_eq!(es.skipgrams, alloc::vec![(2, 1)]);
        let def = TextModelConfig::default_preset();
        assert_eq!(def.nwords, alloc::vec![1, 2]);
        assert!(def.skipgrams.is_empty());
        // blank cells inherit the English row
        assert!(def.lowercase && ar.remove_duplicates && es.remove_punctuation);
    }

    #[test]
    fn invalid_tokenizers_are_rejected() {
        let mut c = TextModelConfig::english();
        c.skipgrams = alloc::vec![(1, 1)];
        assert!(c.validate().is_err());
        let mut c = TextModelConfig::english();
        c.nwords.clear();
        c.skipgrams.clear();
        c.qgrams.clear();
        assert!(c.validate().is_err());
        let mut c = TextModelConfig::english();
        c.qgrams = alloc::vec![0];
        assert!(c.validate().is_err());
    }

    #[test]
    fn arabic_needs_stopwords() {
        assert!(matches!(TextPipeline::from_config(TextModelConfig::arabic()), Err(Error::Config(_))));
        let res = TextResources { stopwords: Some(BTreeSet::new()), ..Default::default() };
        TextPipeline::new(TextModelConfig::arabic(), res).unwrap();
    }

    #[test]
    fn canonical_key_ignores_set_order() {
        let mut a = TextModelConfig::english();
        let mut b = TextModelConfig::english();
        a.qgrams = alloc::vec![4, 3];
        b.qgrams = alloc::vec![3, 4, 4];
        assert_eq!(a.canonical_key(), b.canonical_key());
    }
}
