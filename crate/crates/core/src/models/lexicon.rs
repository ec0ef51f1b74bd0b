use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::textproc::TextPipeline;
use crate::{Error, Result};

/// Positive and negative word sets, stored in normalized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lexicon {
    positive: BTreeSet<String>,
    negative: BTreeSet<String>,
}

impl Lexicon {
    /// Normalizes every entry with `pipeline`. Entries that normalize to
    /// more than one token are dropped with a warning; entries that vanish
    /// (e.g. deleted stopwords) are dropped silently.
    pub fn new<P, N>(positive: P, negative: N, pipeline: &TextPipeline) -> Result<Self>
    where
        P: IntoIterator,
        P::Item: AsRef<str>,
        N: IntoIterator,
        N::Item: AsRef<str>,
    {
        let fold = |words: Vec<String>| -> BTreeSet<String> {
            words
                .into_iter()
                .filter_map(|w| {
                    let n = pipeline.normalize(&w);
                    if n.split_whitespace().count() > 1 {
                        log::warn!("lexicon entry `{w}` is not a single word; skipped");
                        None
                    } else if n.is_empty() {
                        None
                    } else {
                        Some(n)
                    }
                })
                .collect()
        };
        let positive = fold(positive.into_iter().map(|w| w.as_ref().to_string()).collect());
        let negative = fold(negative.into_iter().map(|w| w.as_ref().to_string()).collect());
        if let Some(w) = positive.intersection(&negative).next() {
            return Err(Error::Config(alloc::format!("lexicon word `{w}` is both positive and negative")));
        }
        if positive.is_empty() && negative.is_empty() {
            return Err(Error::Config("empty lexicon".into()));
        }
        Ok(Self { positive, negative })
    }

    /// Parses `word<TAB>pos|neg` lines; blank lines and `#` comments skipped.
    pub fn parse(text: &str, pipeline: &TextPipeline) -> Result<Self> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, polarity) = line
                .rsplit_once('\t')
                .ok_or_else(|| Error::Config(alloc::format!("lexicon line {}: expected `word<TAB>pos|neg`", i + 1)))?;
            match polarity.trim() {
                "pos" => pos.push(word),
                "neg" => neg.push(word),
                other => {
                    return Err(Error::Config(alloc::format!("lexicon line {}: unknown polarity `{other}`", i + 1)))
                }
            }
        }
        Self::new(pos, neg, pipeline)
    }

    pub fn positive(&self) -> &BTreeSet<String> {
        &self.positive
    }

    pub fn negative(&self) -> &BTreeSet<String> {
        &self.negative
    }

    /// Raw occurrence counts `[positive, negative]` over the normalized
    /// unigrams of `text`.
    pub fn score(&self, text: &str, pipeline: &TextPipeline) -> [f64; 2] {
        let normalized = pipeline.normalize(text);
        let mut counts = [0.0; 2];
        for tok in normalized.split_whitespace() {
            if self.positive.contains(tok) {
                counts[0] += 1.0;
            } else if self.negative.contains(tok) {
                counts[1] += 1.0;
            }
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::TextModelConfig;

    fn pipeline() -> TextPipeline {
        TextPipeline::from_config(TextModelConfig::english()).unwrap()
    }

    #[test]
    fn counts_with_multiplicity() {
        let p = pipeline();
        let lex = Lexicon::new(["good"], ["bad"], &p).unwrap();
        assert_eq!(lex.score("good good bad", &p), [2.0, 1.0]);
        assert_eq!(lex.score("nothing here", &p), [0.0, 0.0]);
        assert_eq!(lex.score("GOOD!", &p), [1.0, 0.0]);
    }

    #[test]
    fn overlap_rejected() {
        let p = pipeline();
        assert!(Lexicon::new(["Good"], ["good"], &p).is_err());
    }

    #[test]
    fn multiword_skipped_and_parse() {
        let p = pipeline();
        let lex = Lexicon::parse("good\tpos\nvery bad\tneg\nawful\tneg\n", &p).unwrap();
        assert_eq!(lex.negative().len(), 1);
        assert!(Lexicon::parse("good\tmaybe\n", &p).is_err());
    }
}
