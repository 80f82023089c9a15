//! Review ingestion and the integer-encoded corpus the models run on.
//!
//! The pipeline is `load_reviews` → [`ReviewSet::filter_by_rating`] →
//! [`build_corpus`]. Word ids are dense and assigned in order of first
//! appearance among the words that survive pruning.

mod review;
mod tokenize;

use std::collections::HashMap;
use std::path::PathBuf;

use thiserror::Error;

pub use review::{load_reviews, InputFormat, Review, ReviewSet};
pub use tokenize::{parse_word_list, tokenize, TokenizerConfig};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("{}: missing column '{column}'", path.display())]
    MissingColumn { path: PathBuf, column: String },
    #[error("inverted rating bounds: min {min} > max {max}")]
    InvertedRatingBounds { min: u8, max: u8 },
    #[error("rating bounds {min}..={max} outside 1..=5")]
    RatingBoundsOutOfRange { min: u8, max: u8 },
    #[error("empty corpus: no tokens left after tokenization and pruning")]
    EmptyCorpus,
}

/// Vocabulary pruning applied after tokenization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruneConfig {
    /// Words with fewer total occurrences than this are dropped. `0` disables pruning.
    pub min_count: usize,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig { min_count: 2 }
    }
}

impl PruneConfig {
    pub fn disabled() -> Self {
        PruneConfig { min_count: 0 }
    }
}

/// Bijection between words and dense ids `0..len()`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `word`, inserting it if new.
    pub fn intern(&mut self, word: &str) -> u32 {
        if let Some(&id) = self.ids.get(word) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(word.to_string());
        self.ids.insert(word.to_string(), id);
        id
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.ids.get(word).copied()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Integer-encoded documents with their vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    vocab: Vocabulary,
    docs: Vec<Vec<u32>>,
    doc_ids: Vec<String>,
    dropped: Vec<String>,
}

impl Corpus {
    /// Builds a corpus from already-tokenized documents, skipping tokenization
    /// and pruning. Empty documents are dropped; ids are the document indices.
    pub fn from_tokens<D, S>(docs: impl IntoIterator<Item = D>) -> Result<Corpus, CorpusError>
    where
        D: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = Vocabulary::new();
        let mut encoded = Vec::new();
        let mut doc_ids = Vec::new();
        let mut dropped = Vec::new();
        for (i, doc) in docs.into_iter().enumerate() {
            let ids: Vec<u32> = doc.into_iter().map(|w| vocab.intern(w.as_ref())).collect();
            if ids.is_empty() {
                dropped.push(i.to_string());
            } else {
                encoded.push(ids);
                doc_ids.push(i.to_string());
            }
        }
        if encoded.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }
        Ok(Corpus { vocab, docs: encoded, doc_ids, dropped })
    }

    /// Wraps already-encoded documents. Every id must be below `vocab.len()`;
    /// vocabulary words need not occur in any document.
    pub fn from_encoded(vocab: Vocabulary, docs: Vec<Vec<u32>>) -> Result<Corpus, CorpusError> {
        let v = vocab.len() as u32;
        if let Some((d, _)) = docs.iter().enumerate().find(|(_, doc)| doc.iter().any(|&w| w >= v)) {
            return Err(CorpusError::MalformedRow { row: d + 1, reason: format!("word id out of range for V = {v}") });
        }
        let mut kept = Vec::new();
        let mut doc_ids = Vec::new();
        let mut dropped = Vec::new();
        for (i, doc) in docs.into_iter().enumerate() {
            if doc.is_empty() {
                dropped.push(i.to_string());
            } else {
                kept.push(doc);
                doc_ids.push(i.to_string());
            }
        }
        if kept.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }
        Ok(Corpus { vocab, docs: kept, doc_ids, dropped })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn docs(&self) -> &[Vec<u32>] {
        &self.docs
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// Ids of reviews that had no tokens left and were left out of `docs`.
    pub fn dropped(&self) -> &[String] {
        &self.dropped
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn num_tokens(&self) -> usize {
        self.docs.iter().map(Vec::len).sum()
    }

    /// Document `d` as words.
    pub fn decode(&self, d: usize) -> Vec<&str> {
        self.docs[d].iter().map(|&w| self.vocab.word(w)).collect()
    }
}

/// Tokenizes every review, prunes rare words, and encodes what is left.
pub fn build_corpus(rs: &ReviewSet, cfg: &TokenizerConfig, prune: PruneConfig) -> Result<Corpus, CorpusError> {
    let tokenized: Vec<Vec<String>> = rs.reviews().iter().map(|r| tokenize(&r.text, cfg)).collect();

    let mut counts: HashMap<&str, usize> = HashMap::new();
    for tok in tokenized.iter().flatten() {
        *counts.entry(tok.as_str()).or_default() += 1;
    }

    let mut vocab = Vocabulary::new();
    let mut docs = Vec::new();
    let mut doc_ids = Vec::new();
    let mut dropped = Vec::new();
    for (review, tokens) in rs.reviews().iter().zip(&tokenized) {
        let ids: Vec<u32> = tokens.iter().filter(|t| counts[t.as_str()] >= prune.min_count).map(|t| vocab.intern(t)).collect();
        if ids.is_empty() {
            dropped.push(review.id.clone());
        } else {
            docs.push(ids);
            doc_ids.push(review.id.clone());
        }
    }
    if !dropped.is_empty() {
        log::info!("dropped {} empty document(s): {}", dropped.len(), dropped.join(", "));
    }
    if docs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(Corpus { vocab, docs, doc_ids, dropped })
}
