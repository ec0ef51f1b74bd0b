#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stacksa_core::{Corpus, DenseMatrix, LabeledDocument};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(rng: &mut ChaCha8Rng, len: usize) -> String {
    // no doubled letters, so duplicate squeezing leaves words intact
    let mut w = String::new();
    let mut prev = ' ';
    while w.chars().count() < len {
        let c = rng.gen_range(b'a'..=b'z') as char;
        if c != prev {
            w.push(c);
            prev = c;
        }
    }
    w
}

/// Noiseless XOR pattern on [-1, 1]².
pub fn xor_dataset(n: usize, seed: u64) -> (DenseMatrix, Vec<usize>) {
    let mut r = rng(seed);
    let mut rows = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    while rows.len() < n {
        let a: f64 = r.gen_range(-1.0..1.0);
        let b: f64 = r.gen_range(-1.0..1.0);
        if a.abs() < 0.05 || b.abs() < 0.05 {
            continue;
        }
        rows.push(vec![a, b]);
        y.push(((a > 0.0) ^ (b > 0.0)) as usize);
    }
    (DenseMatrix::from_rows(&rows).unwrap(), y)
}

/// Three imbalanced classes. Part of the signal sits in a few frequent
/// class-marker words, part in lexicon words drawn from lists too large for
/// most of them to appear in a training sample.
pub struct SentimentTask {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    filler: Vec<String>,
    markers: [Vec<String>; 3],
}

pub const CLASSES: [&str; 3] = ["negative", "neutral", "positive"];

impl SentimentTask {
    pub fn new() -> Self {
        let mut r = rng(12345);
        let mut seen = std::collections::BTreeSet::new();
        let mut fresh = |r: &mut ChaCha8Rng, len: usize| loop {
            let w = random_word(r, len);
            if seen.insert(w.clone()) {
                return w;
            }
        };
        let positive = (0..400).map(|_| fresh(&mut r, 7)).collect();
        let negative = (0..400).map(|_| fresh(&mut r, 7)).collect();
        let filler = (0..300).map(|_| fresh(&mut r, 5)).collect();
        let markers = [
            (0..3).map(|_| fresh(&mut r, 6)).collect(),
            (0..3).map(|_| fresh(&mut r, 6)).collect(),
            (0..3).map(|_| fresh(&mut r, 6)).collect(),
        ];
        Self { positive, negative, filler, markers }
    }

    pub fn lexicon_tsv(&self) -> String {
        let mut s = String::new();
        for w in &self.positive {
            writeln!(s, "{w}\tpos").unwrap();
        }
        for w in &self.negative {
            writeln!(s, "{w}\tneg").unwrap();
        }
        s
    }

    pub fn corpus(&self, n: usize, seed: u64) -> Corpus {
        let mut r = rng(seed);
        (0..n)
            .map(|_| {
                let u: f64 = r.gen();
                let class = if u < 0.15 { 0 } else if u < 0.75 { 1 } else { 2 };
                let mut words: Vec<String> = (0..r.gen_range(5..9)).map(|_| self.filler.choose(&mut r).unwrap().clone()).collect();
                let marker_class = if r.gen_bool(0.25) { r.gen_range(0..3) } else { class };
                if r.gen_bool(0.5) {
                    words.push(self.markers[marker_class].choose(&mut r).unwrap().clone());
                }
                let lex = match class {
                    0 => Some(&self.negative),
                    2 => Some(&self.positive),
                    _ => None,
                };
                if let Some(lex) = lex {
                    for _ in 0..r.gen_range(1..3) {
                        if r.gen_bool(0.8) {
                            words.push(lex.choose(&mut r).unwrap().clone());
                        }
                    }
                } else if r.gen_bool(0.1) {
                    let side = if r.gen_bool(0.5) { &self.positive } else { &self.negative };
                    words.push(side.choose(&mut r).unwrap().clone());
                }
                words.shuffle(&mut r);
                LabeledDocument::new(words.join(" "), CLASSES[class])
            })
            .collect()
    }
}

/// Small separable 3-class corpus with lexicon and emoji-ish cues.
pub fn tiny_corpus(per_class: usize, seed: u64) -> Corpus {
    let mut r = rng(seed);
    let cues = [("negative", ["awful", "sad", "rain"]), ("neutral", ["bus", "monday", "table"]), ("positive", ["great", "happy", "sun"])];
    let filler = ["the", "a", "today", "with", "my", "friend", "was", "very"];
    let mut docs = Vec::new();
    for i in 0..per_class {
        for (label, words) in &cues {
            let mut t: Vec<&str> = (0..3).map(|_| *filler.choose(&mut r).unwrap()).collect();
            t.push(words[i % 3]);
            t.push(words.choose(&mut r).unwrap());
            t.shuffle(&mut r);
            docs.push(LabeledDocument::new(t.join(" "), *label));
        }
    }
    Corpus::new(docs)
}

pub struct Resources {
    pub dir: PathBuf,
}

pub fn write_jsonl(path: &Path, corpus: &Corpus) {
    let s: String = corpus.docs.iter().map(|d| serde_json::to_string(d).unwrap() + "\n").collect();
    fs::write(path, s).unwrap();
}

/// Writes HA corpus (3 classes), lexicon, emoji corpus (4 classes) and a
/// 7-wide embedding table into `dir`.
pub fn write_resources(dir: &Path) -> Resources {
    let ha: Corpus = [
        ("i love it great", "positive"),
        ("happy sunny great day", "positive"),
        ("so happy with this", "positive"),
        ("awful sad news", "negative"),
        ("i hate the rain", "negative"),
        ("terrible awful thing", "negative"),
        ("the bus is at noon", "neutral"),
        ("monday meeting at the table", "neutral"),
        ("a table and a chair", "neutral"),
    ]
    .into_iter()
    .map(|(t, k)| LabeledDocument::new(t, k))
    .collect();
    write_jsonl(&dir.join("ha.jsonl"), &ha);
    fs::write(dir.join("lexicon.tsv"), "great\tpos\nhappy\tpos\nsun\tpos\nawful\tneg\nsad\tneg\nrain\tneg\n").unwrap();
    let emo: Corpus = [
        ("love you", "❤"),
        ("my heart", "❤"),
        ("so funny", "😂"),
        ("lol that joke", "😂"),
        ("crying now", "😭"),
        ("so sad today", "😭"),
        ("on fire", "🔥"),
        ("hot new track", "🔥"),
    ]
    .into_iter()
    .map(|(t, k)| LabeledDocument::new(t, k))
    .collect();
    write_jsonl(&dir.join("emoji.jsonl"), &emo);
    let mut r = rng(99);
    let words = ["the", "a", "today", "with", "my", "friend", "was", "very", "awful", "sad", "rain", "bus", "monday", "table", "great", "happy", "sun"];
    let mut emb = format!("{} 7\n", words.len());
    for w in words {
        let v: Vec<String> = (0..7).map(|_| format!("{:.4}", r.gen_range(-1.0..1.0))).collect();
        writeln!(emb, "{w} {}", v.join(" ")).unwrap();
    }
    fs::write(dir.join("vectors.txt"), emb).unwrap();
    Resources { dir: dir.to_path_buf() }
}

/// Spec text enabling `models`, with small EvoDAG settings.
pub fn spec_text(models: &[&str], seed: u64, population: usize, window: usize) -> String {
    let list: Vec<String> = models.iter().map(|m| format!("\"{m}\"")).collect();
    format!(
        "language = \"english\"\nmodels = [{}]\nk = 3\nseed = {seed}\n\n[resources]\nha_corpus = \"ha.jsonl\"\nlexicon = \"lexicon.tsv\"\nemoji_corpus = \"emoji.jsonl\"\nembeddings = \"vectors.txt\"\n\n[evodag]\npopulation_size = {population}\nearly_stop_window = {window}\n",
        list.join(", ")
    )
}
