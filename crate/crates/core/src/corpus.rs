//! Labeled documents, the unit of ingestion.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDocument {
    pub text: String,
    pub klass: String,
}

impl LabeledDocument {
    pub fn new(text: impl Into<String>, klass: impl Into<String>) -> Self {
        Self { text: text.into(), klass: klass.into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub docs: Vec<LabeledDocument>,
}

impl Corpus {
    pub fn new(docs: Vec<LabeledDocument>) -> Self {
        Self { docs }
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.docs.iter().map(|d| d.text.as_str()).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.docs.iter().map(|d| d.klass.as_str()).collect()
    }

    /// Sorted, duplicate-free class labels.
    pub fn classes(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.docs.iter().map(|d| d.klass.as_str()).collect();
        set.into_iter().map(String::from).collect()
    }

    pub fn subset(&self, indices: &[usize]) -> Corpus {
        Corpus { docs: indices.iter().map(|&i| self.docs[i].clone()).collect() }
    }
}

impl FromIterator<LabeledDocument> for Corpus {
    fn from_iter<I: IntoIterator<Item = LabeledDocument>>(iter: I) -> Self {
        Corpus { docs: iter.into_iter().collect() }
    }
}

/// Maps labels to their index in `classes` (which must be sorted).
pub fn encode_labels<S: AsRef<str>>(labels: &[S], classes: &[String]) -> crate::Result<Vec<usize>> {
    labels
        .iter()
        .map(|l| {
            classes
                .binary_search_by(|c| c.as_str().cmp(l.as_ref()))
                .map_err(|_| crate::Error::UnknownLabel(String::from(l.as_ref())))
        })
        .collect()
}
