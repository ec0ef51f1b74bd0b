use alloc::string::String;
use alloc::vec::Vec;

use super::TextModelConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TokenFamily {
    WordNgram,
    SkipGram,
    QGram,
}

impl TokenFamily {
    fn tag(self) -> &'static str {
        match self {
            TokenFamily::WordNgram => "w:",
            TokenFamily::SkipGram => "s:",
            TokenFamily::QGram => "q:",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    pub family: TokenFamily,
    pub text: String,
}

impl Token {
    /// Family-tagged key; a q-gram never equals a word n-gram of the same text.
    pub fn key(&self) -> String {
        let mut s = String::with_capacity(self.text.len() + 2);
        s.push_str(self.family.tag());
        s.push_str(&self.text);
        s
    }
}

/// Multiset of tokens, in emission order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TokenBag {
    pub tokens: Vec<Token>,
}

impl TokenBag {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn texts(&self, family: TokenFamily) -> Vec<&str> {
        self.tokens.iter().filter(|t| t.family == family).map(|t| t.text.as_str()).collect()
    }
}

/// Tokenizes already-normalized text with every configured tokenizer.
pub fn tokenize(text: &str, config: &TextModelConfig) -> TokenBag {
    let words: Vec<&str> = text.split_whitespace().collect();
    let mut tokens = Vec::new();
    for &n in &config.nwords {
        if n == 0 || words.len() < n {
            continue;
        }
        for window in words.windows(n) {
            tokens.push(Token { family: TokenFamily::WordNgram, text: window.join(" ") });
        }
    }
    for &(a, b) in &config.skipgrams {
        if a == 0 {
            continue;
        }
        let span = (a - 1) * (b + 1);
        if words.len() <= span {
            continue;
        }
        for start in 0..words.len() - span {
            let picked: Vec<&str> = (0..a).map(|i| words[start + i * (b + 1)]).collect();
            tokens.push(Token { family: TokenFamily::SkipGram, text: picked.join(" ") });
        }
    }
    if !config.qgrams.is_empty() {
        let chars: Vec<char> = text.chars().collect();
        for &q in &config.qgrams {
            if q == 0 || chars.len() < q {
                continue;
            }
            for window in chars.windows(q) {
                tokens.push(Token { family: TokenFamily::QGram, text: window.iter().collect() });
            }
        }
    }
    TokenBag { tokens }
}
