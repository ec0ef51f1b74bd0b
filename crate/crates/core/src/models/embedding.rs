use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Word vectors of one common width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingTable {
    width: usize,
    index: BTreeMap<String, usize>,
    data: Vec<f64>,
}

impl EmbeddingTable {
    pub fn new(width: usize, words: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidParameter("embedding width must be positive".into()));
        }
        let mut index = BTreeMap::new();
        let mut data = Vec::with_capacity(words.len() * width);
        for (word, v) in words {
            if v.len() != width {
                return Err(Error::DimensionMismatch { expected: width, got: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter(alloc::format!("non-finite vector for `{word}`")));
            }
            if index.contains_key(&word) {
                log::warn!("duplicate embedding for `{word}`; keeping the first");
                continue;
            }
            index.insert(word, data.len() / width);
            data.extend(v);
        }
        Ok(Self { width, index, data })
    }

    /// Parses the text format: a `<count> <width>` header, then one
    /// `word v1 .. v_width` line per word.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
        let mut h = header.split_whitespace();
        let bad_header = || Error::Config("embedding header must be `<count> <width>`".into());
        let count: usize = h.next().and_then(|s| s.parse().ok()).ok_or_else(bad_header)?;
        let width: usize = h.next().and_then(|s| s.parse().ok()).ok_or_else(bad_header)?;
        let mut words = Vec::with_capacity(count);
        for (i, line) in lines {
            let mut parts = line.split_whitespace();
            let word = parts.next().expect("non-blank line");
            let v: core::result::Result<Vec<f64>, _> = parts.map(str::parse::<f64>).collect();
            let v = v.map_err(|e| Error::Config(alloc::format!("embedding line {}: {e}", i + 1)))?;
            if v.len() != width {
                return Err(Error::Config(alloc::format!(
                    "embedding line {}: expected {width} values, found {}",
                    i + 1,
                    v.len()
                )));
            }
            words.push((String::from(word), v));
        }
        if words.len() != count {
            log::warn!("embedding header announces {count} words, file has {}", words.len());
        }
        Self::new(width, words)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index.get(word).map(|&i| &self.data[i * self.width..(i + 1) * self.width])
    }

    /// Mean vector of the whitespace tokens found in the table (exact form
    /// first, then lowercased); zero when none is found.
    pub fn sentence_vector(&self, text: &str) -> Vec<f64> {
        let mut acc = vec![0.0; self.width];
        let mut n = 0usize;
        for tok in text.split_whitespace() {
            let v = match self.get(tok) {
                Some(v) => Some(v),
                None => self.get(&tok.to_lowercase()),
            };
            if let Some(v) = v {
                acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                n += 1;
            }
        }
        if n > 0 {
            acc.iter_mut().for_each(|a| *a /= n as f64);
        }
        acc
    }
}
