//! Stacked text classification.
//!
//! A set of first-stage text models (TF-IDF over the training set, transfer
//! classifiers, lexicon counters, emoji-prediction space, word embeddings)
//! turn a text into per-class decision values of linear one-vs-rest SVMs.
//! The values are produced out-of-fold, concatenated and handed to a
//! steady-state genetic-programming classifier that makes the final call.
//!
//! The crate is `no_std` (with `alloc`); file formats and the command-line
//! tool live in the `stacksa` crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod classic;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod evodag;
pub mod folds;
pub mod linalg;
pub mod linmodel;
pub mod models;
pub mod pipeline;
pub mod stacker;
pub mod textproc;
pub mod vector;

pub use corpus::{Corpus, LabeledDocument};
pub use error::{Error, Result};
pub use vector::{DenseMatrix, FeatureRow, FeatureVec, SparseVector};
