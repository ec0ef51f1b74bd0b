//! Corpus, word-list, lexicon and embedding files.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use stacksa_core::models::{EmbeddingTable, Lexicon};
use stacksa_core::textproc::TextPipeline;
use stacksa_core::{Corpus, LabeledDocument};

use crate::error::{Error, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// A JSONL row whose label may be absent (prediction input).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextRow {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub klass: Option<String>,
}

/// Parses JSONL rows; blank lines are skipped, errors carry the 1-based
/// line number.
pub fn parse_jsonl<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<Vec<T>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(line).map_err(|e| Error::Line { path: path.into(), line: i + 1, message: e.to_string() })?;
        rows.push(row);
    }
    Ok(rows)
}

/// `{"text": .., "klass": ..}` rows.
pub fn read_corpus(path: &Path) -> Result<Corpus> {
    let docs: Vec<LabeledDocument> = parse_jsonl(&read_text(path)?, path)?;
    Ok(Corpus::new(docs))
}

pub fn read_rows(path: &Path) -> Result<Vec<TextRow>> {
    parse_jsonl(&read_text(path)?, path)
}

/// One word per line; blank lines and `#` comments skipped.
pub fn read_word_list(path: &Path) -> Result<BTreeSet<String>> {
    Ok(read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

pub fn read_lexicon(path: &Path, pipeline: &TextPipeline) -> Result<Lexicon> {
    Ok(Lexicon::parse(&read_text(path)?, pipeline)?)
}

pub fn read_embeddings(path: &Path) -> Result<EmbeddingTable> {
    Ok(EmbeddingTable::parse(&read_text(path)?)?)
}

/// Raw texts for emoji-corpus preparation: one per line, or a JSON object
/// with a `text` field.
pub fn read_raw_texts(path: &Path) -> Result<Vec<String>> {
    #[derive(Deserialize)]
    struct Raw {
        text: String,
    }
    Ok(read_text(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| match serde_json::from_str::<Raw>(l) {
            Ok(r) => r.text,
            Err(_) => l.to_string(),
        })
        .collect())
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn to_jsonl<T: Serialize>(rows: &[T]) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r).expect("rows serialize"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_numbers_in_errors() {
        let text = "{\"text\":\"a\",\"klass\":\"x\"}\n\n{\"text\":\"b\"}\n";
        let err = parse_jsonl::<LabeledDocument>(text, Path::new("t.jsonl")).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let rows: Vec<TextRow> = parse_jsonl(text, Path::new("t.jsonl")).unwrap();
        assert_eq!(rows[1].klass, None);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
