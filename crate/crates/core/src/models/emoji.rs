//! Emoji detection and distant-supervision corpus preparation.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Corpus, LabeledDocument};
use crate::folds::derive_seed;

/// Version tag of [`EMOJI_RANGES`].
pub const EMOJI_TABLE_VERSION: &str = "stacksa-emoji-1";

/// Inclusive codepoint ranges treated as emoji.
pub const EMOJI_RANGES: &[(u32, u32)] = &[
    (0x00A9, 0x00A9),
    (0x00AE, 0x00AE),
    (0x203C, 0x203C),
    (0x2049, 0x2049),
    (0x2122, 0x2122),
    (0x2139, 0x2139),
    (0x2194, 0x2199),
    (0x21A9, 0x21AA),
    (0x231A, 0x231B),
    (0x2328, 0x2328),
    (0x23CF, 0x23CF),
    (0x23E9, 0x23F3),
    (0x23F8, 0x23FA),
    (0x24C2, 0x24C2),
    (0x25AA, 0x25AB),
    (0x25B6, 0x25B6),
    (0x25C0, 0x25C0),
    (0x25FB, 0x25FE),
    (0x2600, 0x27BF),
    (0x2934, 0x2935),
    (0x2B05, 0x2B07),
    (0x2B1B, 0x2B1C),
    (0x2B50, 0x2B50),
    (0x2B55, 0x2B55),
    (0x3030, 0x3030),
    (0x303D, 0x303D),
    (0x3297, 0x3297),
    (0x3299, 0x3299),
    (0x1F004, 0x1F004),
    (0x1F0CF, 0x1F0CF),
    (0x1F170, 0x1F251),
    (0x1F300, 0x1F3FA),
    (0x1F400, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F7E0, 0x1F7EB),
    (0x1F90C, 0x1F9FF),
    (0x1FA70, 0x1FAFF),
];

/// Characters that modify or join emoji without being a type of their own.
pub fn is_emoji_modifier(c: char) -> bool {
    matches!(c as u32, 0xFE0E | 0xFE0F | 0x200D | 0x20E3 | 0x1F3FB..=0x1F3FF | 0xE0020..=0xE007F)
}

pub fn is_emoji(c: char) -> bool {
    let cp = c as u32;
    if is_emoji_modifier(c) {
        return false;
    }
    EMOJI_RANGES
        .binary_search_by(|&(lo, hi)| {
            if hi < cp {
                core::cmp::Ordering::Less
            } else if lo > cp {
                core::cmp::Ordering::Greater
            } else {
                core::cmp::Ordering::Equal
            }
        })
        .is_ok()
}

/// The single emoji type in `text`, or `None` when it has zero or several.
pub fn single_emoji(text: &str) -> Option<char> {
    let mut found = None;
    for c in text.chars().filter(|&c| is_emoji(c)) {
        match found {
            None => found = Some(c),
            Some(f) if f == c => {}
            Some(_) => return None,
        }
    }
    found
}

/// Removes emoji and their modifiers; ends are trimmed, inner spacing kept.
pub fn strip_emoji(text: &str) -> String {
    let s: String = text.chars().filter(|&c| !is_emoji(c) && !is_emoji_modifier(c)).collect();
    String::from(s.trim())
}

pub fn is_retweet(text: &str) -> bool {
    text.trim_start().starts_with("RT")
        && text.trim_start()[2..].chars().next().is_none_or(|c| c.is_whitespace() || c == ':')
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmojiCorpus {
    pub corpus: Corpus,
    /// Examples per kept class, after sampling, sorted by class.
    pub class_counts: Vec<(String, usize)>,
}

/// Keeps texts with exactly one emoji type that are not retweets, samples up
/// to `max_per_class` per emoji uniformly (bottom-k on a seeded hash of the
/// stream position, so the result does not depend on chunking), keeps the
/// `class_count` most frequent emojis and strips emoji from the text.
/// Documents come out in stream order.
pub fn prepare_emoji_corpus<I, S>(raw: I, max_per_class: usize, class_count: usize, seed: u64) -> EmojiCorpus
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    // per emoji: stream frequency and a max-heap of (key, position, text)
    let mut freq: BTreeMap<char, usize> = BTreeMap::new();
    let mut heaps: BTreeMap<char, BinaryHeap<(u64, usize, String)>> = BTreeMap::new();
    for (pos, text) in raw.into_iter().enumerate() {
        let text = text.as_ref();
        if is_retweet(text) {
            continue;
        }
        let Some(e) = single_emoji(text) else { continue };
        *freq.entry(e).or_default() += 1;
        if max_per_class == 0 {
            continue;
        }
        let key = derive_seed(seed, pos as u64);
        let heap = heaps.entry(e).or_default();
        if heap.len() < max_per_class {
            heap.push((key, pos, strip_emoji(text)));
        } else if heap.peek().is_some_and(|top| key < top.0) {
            heap.pop();
            heap.push((key, pos, strip_emoji(text)));
        }
    }
    let mut ranked: Vec<(char, usize)> = freq.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(class_count);
    let mut docs: Vec<(usize, LabeledDocument)> = Vec::new();
    let mut class_counts = Vec::new();
    for (e, _) in &ranked {
        let heap = heaps.remove(e).unwrap_or_default();
        let mut label = String::new();
        label.push(*e);
        class_counts.push((label.clone(), heap.len()));
        docs.extend(heap.into_iter().map(|(_, pos, text)| (pos, LabeledDocument::new(text, label.clone()))));
    }
    docs.sort_by_key(|d| d.0);
    class_counts.sort();
    EmojiCorpus { corpus: docs.into_iter().map(|d| d.1).collect(), class_counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn table_is_sorted_and_disjoint() {
        assert!(EMOJI_RANGES.windows(2).all(|w| w[0].1 < w[1].0));
        assert!(EMOJI_RANGES.iter().all(|(a, b)| a <= b));
    }

    #[test]
    fn detection() {
        assert!(is_emoji('❤') && is_emoji('😀') && is_emoji('🔥'));
        assert!(!is_emoji('a') && !is_emoji('\u{FE0F}') && !is_emoji('\u{1F3FB}'));
        assert_eq!(single_emoji("nice ❤❤ day"), Some('❤'));
        assert_eq!(single_emoji("nice ❤\u{FE0F} day"), Some('❤'));
        assert_eq!(single_emoji("nice ❤ day 😀"), None);
        assert_eq!(single_emoji("plain"), None);
    }

    #[test]
    fn rules() {
        let raw = vec!["RT @x nice ❤", "nice ❤ day 😀", "nice ❤❤ day", "great 😀", "RTS are fun 😀"];
        let out = prepare_emoji_corpus(raw, 10, 64, 1);
        let texts: Vec<&str> = out.corpus.texts();
        assert_eq!(texts, vec!["nice  day", "great", "RTS are fun"]);
        assert_eq!(out.corpus.labels(), vec!["❤", "😀", "😀"]);
    }

    #[test]
    fn caps_and_top_classes() {
        let mut raw = Vec::new();
        for i in 0..50 {
            raw.push(alloc::format!("a{i} 😀"));
        }
        for i in 0..20 {
            raw.push(alloc::format!("b{i} ❤"));
        }
        raw.push(String::from("c 🔥"));
        let out = prepare_emoji_corpus(&raw, 8, 2, 3);
        assert_eq!(out.class_counts, vec![(String::from("❤"), 8), (String::from("😀"), 8)]);
        assert!(out.corpus.texts().iter().all(|t| t.chars().all(|c| !is_emoji(c))));
        let again = prepare_emoji_corpus(&raw, 8, 2, 3);
        assert_eq!(out, again);
        let other = prepare_emoji_corpus(&raw, 8, 2, 4);
        assert_ne!(out.corpus, other.corpus);
    }
}
