//! Text normalization.
//!
//! Steps run in this order:
//!
//! 1. entity words (`_ent` or removed)
//! 2. urls, users and hashtags (`_url`, `_usr`, `_htag` or removed)
//! 3. emoticons (`_pos`, `_neg`, `_neu` or removed)
//! 4. numbers (`_num` or removed)
//! 5. lowercasing
//! 6. diacritic removal
//! 7. collapsing runs of a repeated character
//! 8. punctuation, replaced by a space
//! 9. negation (`not good` becomes `not_good`)
//! 10. stopwords (`_sw` or removed)
//! 11. stemming
//!
//! and the result is re-joined on single spaces. Lowercasing precedes
//! diacritic removal so that case mappings which produce combining marks
//! (`İ` lowercases to `i` + U+0307) are stripped in the same pass.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use super::{Handling, HashtagHandling, ListHandling, TextModelConfig, TextResources};

pub const URL_TOKEN: &str = "_url";
pub const USER_TOKEN: &str = "_usr";
pub const HASHTAG_TOKEN: &str = "_htag";
pub const NUMBER_TOKEN: &str = "_num";
pub const ENTITY_TOKEN: &str = "_ent";
pub const STOPWORD_TOKEN: &str = "_sw";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Pos,
    Neg,
    Neu,
}

impl Polarity {
    pub fn token(self) -> &'static str {
        match self {
            Polarity::Pos => "_pos",
            Polarity::Neg => "_neg",
            Polarity::Neu => "_neu",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pos" => Some(Polarity::Pos),
            "neg" => Some(Polarity::Neg),
            "neu" => Some(Polarity::Neu),
            _ => None,
        }
    }
}

/// Emoticon → polarity table, kept longest-entry-first for greedy matching.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmoticonTable {
    entries: Vec<(String, Polarity)>,
}

const BUNDLED_EMOTICONS: &str = include_str!("../../data/emoticons.tsv");

impl EmoticonTable {
    pub fn new(mut entries: Vec<(String, Polarity)>) -> Self {
        entries.retain(|(e, _)| !e.is_empty());
        entries.sort_by(|a, b| b.0.chars().count().cmp(&a.0.chars().count()).then_with(|| a.0.cmp(&b.0)));
        entries.dedup_by(|a, b| a.0 == b.0);
        Self { entries }
    }

    /// Parses `emoticon<TAB>pos|neg|neu` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (emo, pol) = line
                .split_once('\t')
                .ok_or_else(|| alloc::format!("line {}: expected emoticon<TAB>polarity", n + 1))?;
            let pol = Polarity::parse(pol.trim())
                .ok_or_else(|| alloc::format!("line {}: unknown polarity `{}`", n + 1, pol.trim()))?;
            entries.push((emo.trim().to_string(), pol));
        }
        Ok(Self::new(entries))
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_EMOTICONS).expect("bundled emoticon table is well formed")
    }

    pub fn entries(&self) -> &[(String, Polarity)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Longest-suffix stripper driven by a suffix list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuffixStemmer {
    suffixes: Vec<String>,
    min_stem: usize,
}

impl SuffixStemmer {
    pub fn new(mut suffixes: Vec<String>, min_stem: usize) -> Self {
        suffixes.retain(|s| !s.is_empty());
        suffixes.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then_with(|| a.cmp(b)));
        suffixes.dedup();
        Self { suffixes, min_stem }
    }

    pub fn stem(&self, word: &str) -> String {
        let len = word.chars().count();
        for suffix in &self.suffixes {
            if word.ends_with(suffix.as_str()) && len - suffix.chars().count() >= self.min_stem {
                return word[..word.len() - suffix.len()].to_string();
            }
        }
        word.to_string()
    }
}

/// Normalizes with the bundled emoticon table. Steps that need a word list
/// (entities, negation, stopwords, stemming) are skipped; use
/// [`super::TextPipeline`] to have missing lists reported.
pub fn normalize(text: &str, config: &TextModelConfig) -> String {
    normalize_with(text, config, &TextResources::default())
}

pub(crate) fn normalize_with(text: &str, config: &TextModelConfig, res: &TextResources) -> String {
    let mut s = handle_entities(text, config.entities, res.entities.as_ref());
    s = handle_web_tokens(&s, config);
    if config.emoticons != Handling::Keep {
        s = replace_emoticons(&s, &res.emoticons, config.emoticons);
    }
    if config.numbers != Handling::Keep {
        s = replace_numbers(&s, config.numbers);
    }
    s = char_steps(&s, config);
    if config.remove_punctuation {
        s = s.chars().map(|c| if is_punctuation(c) { ' ' } else { c }).collect();
    }
    let mut words: Vec<String> = s.split_whitespace().map(String::from).collect();
    if config.negation {
        if let Some(neg) = &res.negations {
            words = mark_negation(words, neg);
        }
    }
    if config.stopwords != ListHandling::None {
        if let Some(sw) = &res.stopwords {
            words = words
                .into_iter()
                .filter_map(|w| {
                    if !sw.contains(&w) {
                        Some(w)
                    } else if config.stopwords == ListHandling::Group {
                        Some(STOPWORD_TOKEN.to_string())
                    } else {
                        None
                    }
                })
                .collect();
        }
    }
    if config.stemming {
        if let Some(stemmer) = &res.stemmer {
            for w in &mut words {
                if !w.starts_with('_') {
                    *w = stemmer.stem(w);
                }
            }
        }
    }
    words.retain(|w| !w.is_empty());
    words.join(" ")
}

/// Lowercasing, diacritic removal and duplicate collapsing, as configured.
pub(crate) fn normalize_word(word: &str, config: &TextModelConfig) -> String {
    char_steps(word.trim(), config)
}

fn char_steps(s: &str, config: &TextModelConfig) -> String {
    let mut out: String = if config.lowercase { s.chars().flat_map(char::to_lowercase).collect() } else { s.to_string() };
    if config.remove_diacritics {
        out = out.nfd().filter(|&c| !is_combining_mark(c)).nfc().collect();
    }
    if config.remove_duplicates {
        let mut dedup = String::with_capacity(out.len());
        let mut last = None;
        for c in out.chars() {
            if Some(c) != last {
                dedup.push(c);
            }
            last = Some(c);
        }
        out = dedup;
    }
    out
}

fn handle_entities(text: &str, handling: ListHandling, list: Option<&BTreeSet<String>>) -> String {
    let Some(list) = list.filter(|_| handling != ListHandling::None) else {
        return text.to_string();
    };
    map_tokens(text, |tok| {
        let core = tok.trim_matches(|c: char| c.is_ascii_punctuation() && c != '@' && c != '#');
        if list.contains(core) {
            Some(match handling {
                ListHandling::Group => ENTITY_TOKEN.to_string(),
                _ => String::new(),
            })
        } else {
            None
        }
    })
}

fn handle_web_tokens(text: &str, config: &TextModelConfig) -> String {
    let hashtag = match config.hashtags {
        HashtagHandling::None | HashtagHandling::Keep => Handling::Keep,
        HashtagHandling::Group => Handling::Group,
        HashtagHandling::Delete => Handling::Delete,
    };
    if config.urls == Handling::Keep && config.users == Handling::Keep && hashtag == Handling::Keep {
        return text.to_string();
    }
    map_tokens(text, |tok| {
        if config.urls != Handling::Keep && is_url(tok) {
            return Some(replacement(config.urls, URL_TOKEN).to_string());
        }
        for (sigil, handling, token) in [('@', config.users, USER_TOKEN), ('#', hashtag, HASHTAG_TOKEN)] {
            if handling == Handling::Keep {
                continue;
            }
            if let Some(rest) = tok.strip_prefix(sigil) {
                let name_len: usize = rest
                    .chars()
                    .take_while(|c| c.is_alphanumeric() || *c == '_')
                    .map(char::len_utf8)
                    .sum();
                if name_len > 0 {
                    let mut out = replacement(handling, token).to_string();
                    out.push_str(&rest[name_len..]);
                    return Some(out);
                }
            }
        }
        None
    })
}

fn is_url(tok: &str) -> bool {
    let lower = tok.to_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

fn replacement(handling: Handling, token: &'static str) -> &'static str {
    match handling {
        Handling::Group => token,
        _ => "",
    }
}

/// Applies `f` to each whitespace-separated token, keeping the original
/// token when `f` returns `None`.
fn map_tokens(text: &str, mut f: impl FnMut(&str) -> Option<String>) -> String {
    let mut out = String::with_capacity(text.len());
    for tok in text.split_whitespace() {
        let mapped = f(tok);
        let piece = mapped.as_deref().unwrap_or(tok);
        if !piece.is_empty() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(piece);
        }
    }
    out
}

fn is_emoji_like(s: &str) -> bool {
    s.chars().next().is_some_and(|c| !c.is_ascii())
}

fn replace_emoticons(text: &str, table: &EmoticonTable, handling: Handling) -> String {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        let (byte, c) = chars[i];
        let at_start = i == 0 || chars[i - 1].1.is_whitespace();
        let rest = &text[byte..];
        let hit = table.entries().iter().find(|(emo, _)| {
            if !rest.starts_with(emo.as_str()) {
                return false;
            }
            if is_emoji_like(emo) {
                return true;
            }
            // ASCII emoticons must stand alone on the left and may only be
            // followed by whitespace or non-alphanumerics on the right.
            let follow = rest[emo.len()..].chars().next();
            at_start && follow.is_none_or(|f| !f.is_alphanumeric())
        });
        match hit {
            Some((emo, pol)) => {
                out.push(' ');
                if handling == Handling::Group {
                    out.push_str(pol.token());
                    out.push(' ');
                }
                i += emo.chars().count();
            }
            None => {
                out.push(c);
                i += 1;
            }
        }
    }
    out
}

fn replace_numbers(text: &str, handling: Handling) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_ascii_digit() {
            let mut j = i + 1;
            while j < chars.len()
                && (chars[j].is_ascii_digit()
                    || ((chars[j] == '.' || chars[j] == ',') && chars.get(j + 1).is_some_and(|c| c.is_ascii_digit())))
            {
                j += 1;
            }
            out.push(' ');
            if handling == Handling::Group {
                out.push_str(NUMBER_TOKEN);
                out.push(' ');
            }
            i = j;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

fn mark_negation(words: Vec<String>, negations: &BTreeSet<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(words.len());
    let mut iter = words.into_iter().peekable();
    while let Some(w) = iter.next() {
        if negations.contains(&w) {
            if let Some(next) = iter.next() {
                out.push(alloc::format!("{w}_{next}"));
                continue;
            }
        }
        out.push(w);
    }
    out
}

/// ASCII punctuation (except `_`, which the replacement tokens use) plus the
/// common Unicode punctuation blocks.
pub(crate) fn is_punctuation(c: char) -> bool {
    if c.is_ascii() {
        return c.is_ascii_punctuation() && c != '_';
    }
    matches!(c,
        '¡' | '§' | '«' | '¶' | '·' | '»' | '¿' | '×' | '÷'
        | '\u{2010}'..='\u{2027}' | '\u{2030}'..='\u{205E}'
        | '\u{3001}'..='\u{3003}' | '\u{3008}'..='\u{3011}'
        | '،' | '؛' | '؟' | '٪' | '٫' | '٬' | '۔'
        | '\u{FE50}'..='\u{FE6B}' | '\u{FF01}'..='\u{FF0F}' | '\u{FF1A}'..='\u{FF20}')
}
