//! N-gram frequency tables and phrase-mention counts.
//!
//! Windows slide over the encoded corpus, so stopwords are already gone and
//! never span a document boundary.

use std::collections::HashMap;

use thiserror::Error;

use crate::corpus::{tokenize, Corpus, TokenizerConfig};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NgramError {
    #[error("n-gram length must be at least 1")]
    ZeroLength,
    #[error("entry {key:?} has {len} tokens, expected {n}")]
    WrongLength { key: Vec<String>, len: usize, n: usize },
    #[error("entry {key:?} has a zero count")]
    ZeroCount { key: Vec<String> },
    #[error("phrase '{name}' normalizes to no tokens")]
    EmptyPhrase { name: String },
}

/// Occurrence counts of length-`n` token sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramTable {
    n: usize,
    counts: HashMap<Vec<String>, u64>,
    total: u64,
}

impl NGramTable {
    /// Wraps precomputed counts, checking that every key has `n` tokens and a positive count.
    pub fn from_counts(n: usize, counts: HashMap<Vec<String>, u64>) -> Result<NGramTable, NgramError> {
        if n == 0 {
            return Err(NgramError::ZeroLength);
        }
        for (key, &c) in &counts {
            if key.len() != n {
                return Err(NgramError::WrongLength { key: key.clone(), len: key.len(), n });
            }
            if c == 0 {
                return Err(NgramError::ZeroCount { key: key.clone() });
            }
        }
        let total = counts.values().sum();
        Ok(NGramTable { n, counts, total })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count<S: AsRef<str>>(&self, seq: &[S]) -> u64 {
        let key: Vec<String> = seq.iter().map(|s| s.as_ref().to_string()).collect();
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &HashMap<Vec<String>, u64> {
        &self.counts
    }
}

/// Counts every length-`n` window in every document.
pub fn extract_ngrams(corpus: &Corpus, n: usize) -> Result<NGramTable, NgramError> {
    if n == 0 {
        return Err(NgramError::ZeroLength);
    }
    let mut by_id: HashMap<&[u32], u64> = HashMap::new();
    for doc in corpus.docs() {
        for window in doc.windows(n) {
            *by_id.entry(window).or_default() += 1;
        }
    }
    let vocab = corpus.vocab();
    let counts: HashMap<Vec<String>, u64> =
        by_id.into_iter().map(|(ids, c)| (ids.iter().map(|&w| vocab.word(w).to_string()).collect(), c)).collect();
    let total = counts.values().sum();
    Ok(NGramTable { n, counts, total })
}

/// The `k` most frequent entries, count descending, ties broken by ascending sequence.
pub fn top_ngrams(table: &NGramTable, k: usize) -> Vec<(Vec<String>, u64)> {
    let mut entries: Vec<(&Vec<String>, u64)> = table.counts.iter().map(|(s, &c)| (s, c)).collect();
    entries.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    entries.into_iter().take(k).map(|(s, c)| (s.clone(), c)).collect()
}

/// Named token sequences to count, e.g. competitor names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseQuery {
    phrases: Vec<(String, Vec<String>)>,
}

pub const DEFAULT_COMPETITORS: &[&str] =
    &["progressive", "allstate", "state farm", "esurance", "farmers", "liberty mutual", "nationwide", "usaa"];

impl PhraseQuery {
    /// Normalizes each name with the corpus tokenizer so it matches encoded text.
    pub fn from_names<I, S>(names: I, cfg: &TokenizerConfig) -> Result<PhraseQuery, NgramError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let phrases = names
            .into_iter()
            .map(|name| {
                let name = name.as_ref().trim().to_string();
                let tokens = tokenize(&name, cfg);
                if tokens.is_empty() {
                    Err(NgramError::EmptyPhrase { name })
                } else {
                    Ok((name, tokens))
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(PhraseQuery { phrases })
    }

    pub fn competitors(cfg: &TokenizerConfig) -> PhraseQuery {
        PhraseQuery::from_names(DEFAULT_COMPETITORS, cfg).expect("default competitor names tokenize")
    }

    pub fn phrases(&self) -> &[(String, Vec<String>)] {
        &self.phrases
    }
}

/// Overlapping occurrence count of each phrase, in query order.
/// A phrase with a word outside the vocabulary counts 0.
pub fn phrase_frequency(corpus: &Corpus, query: &PhraseQuery) -> Vec<(String, u64)> {
    let vocab = corpus.vocab();
    query
        .phrases
        .iter()
        .map(|(name, tokens)| {
            let ids: Option<Vec<u32>> = tokens.iter().map(|t| vocab.id(t)).collect();
            let count = match ids {
                Some(ids) => {
                    corpus.docs().iter().map(|doc| doc.windows(ids.len()).filter(|w| *w == ids.as_slice()).count() as u64).sum()
                }
                None => 0,
            };
            (name.clone(), count)
        })
        .collect()
}

/// Phrase counts sorted by count descending, then name.
pub fn rank_phrases(mut counts: Vec<(String, u64)>) -> Vec<(String, u64)> {
    counts.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn key(s: &str) -> Vec<String> {
        s.split(' ').map(str::to_string).collect()
    }

    #[test]
    fn sliding_bigrams() {
        let corpus = Corpus::from_tokens(vec![vec!["customer", "service", "customer", "service"]]).unwrap();
        let t = extract_ngrams(&corpus, 2).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.count(&["customer", "service"]), 2);
        assert_eq!(t.count(&["service", "customer"]), 1);
        assert_eq!(t.total(), 3);
    }

    #[test]
    fn short_doc_contributes_nothing() {
        let corpus = Corpus::from_tokens(vec![vec!["claim"]]).unwrap();
        let t = extract_ngrams(&corpus, 2).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.total(), 0);
        assert_eq!(extract_ngrams(&corpus, 0), Err(NgramError::ZeroLength));
    }

    #[test]
    fn windows_do_not_cross_documents() {
        let corpus = Corpus::from_tokens(vec![vec!["state"], vec!["farm"]]).unwrap();
        assert!(extract_ngrams(&corpus, 2).unwrap().is_empty());
    }

    #[test]
    fn ranking_tie_rule() {
        let counts = HashMap::from([(key("a b"), 2), (key("b a"), 2), (key("c c"), 3)]);
        let t = NGramTable::from_counts(2, counts).unwrap();
        assert_eq!(top_ngrams(&t, 2), vec![(key("c c"), 3), (key("a b"), 2)]);
        assert_eq!(top_ngrams(&t, 10).len(), 3);
        let empty = NGramTable::from_counts(2, HashMap::new()).unwrap();
        assert!(top_ngrams(&empty, 5).is_empty());
    }

    #[test]
    fn from_counts_validates() {
        assert!(matches!(NGramTable::from_counts(2, HashMap::from([(key("a"), 1)])), Err(NgramError::WrongLength { .. })));
        assert!(matches!(NGramTable::from_counts(1, HashMap::from([(key("a"), 0)])), Err(NgramError::ZeroCount { .. })));
    }

    #[test]
    fn phrase_counts() {
        let cfg = TokenizerConfig::default();
        let corpus = Corpus::from_tokens(vec![vec!["state", "farm", "farm"], vec!["farm", "state"]]).unwrap();
        let q = PhraseQuery::from_names(["State Farm", "Progressive", "farm farm"], &cfg).unwrap();
        assert_eq!(
            phrase_frequency(&corpus, &q),
            vec![("State Farm".to_string(), 1), ("Progressive".to_string(), 0), ("farm farm".to_string(), 1)]
        );
        assert!(matches!(PhraseQuery::from_names(["the"], &cfg), Err(NgramError::EmptyPhrase { .. })));
    }

    #[test]
    fn overlapping_phrase_matches() {
        let cfg = TokenizerConfig::with_stopwords(Vec::<String>::new());
        let corpus = Corpus::from_tokens(vec![vec!["aaa", "aaa", "aaa"]]).unwrap();
        let q = PhraseQuery::from_names(["aaa aaa"], &cfg).unwrap();
        assert_eq!(phrase_frequency(&corpus, &q)[0].1, 2);
    }

    #[test]
    fn default_competitors_normalize() {
        let q = PhraseQuery::competitors(&TokenizerConfig::default());
        assert_eq!(q.phrases().len(), 8);
        assert_eq!(q.phrases()[2].1, vec!["state", "farm"]);
    }

    fn small_corpus() -> impl Strategy<Value = Vec<Vec<String>>> {
        proptest::collection::vec(proptest::collection::vec("[abc]", 0..12), 1..5)
            .prop_filter("nonempty", |docs| docs.iter().any(|d| !d.is_empty()))
    }

    proptest! {
        #[test]
        fn unigrams_are_term_frequencies(docs in small_corpus()) {
            let corpus = Corpus::from_tokens(docs.clone()).unwrap();
            let t = extract_ngrams(&corpus, 1).unwrap();
            let mut tf: HashMap<String, u64> = HashMap::new();
            for w in docs.iter().flatten() {
                *tf.entry(w.clone()).or_default() += 1;
            }
            prop_assert_eq!(t.total(), corpus.num_tokens() as u64);
            prop_assert_eq!(t.len(), tf.len());
            for (w, c) in tf {
                prop_assert_eq!(t.count(&[w]), c);
            }
        }

        #[test]
        fn window_totals(docs in small_corpus(), n in 1usize..5) {
            let corpus = Corpus::from_tokens(docs).unwrap();
            let t = extract_ngrams(&corpus, n).unwrap();
            let expected: usize = corpus.docs().iter().map(|d| (d.len() + 1).saturating_sub(n)).sum();
            prop_assert_eq!(t.total(), expected as u64);
            prop_assert_eq!(t.total(), t.counts().values().sum::<u64>());
        }

        #[test]
        fn ranking_is_prefix_stable(docs in small_corpus(), n in 1usize..3, k in 0usize..10) {
            let corpus = Corpus::from_tokens(docs).unwrap();
            let t = extract_ngrams(&corpus, n).unwrap();
            let all = top_ngrams(&t, t.len());
            for pair in all.windows(2) {
                prop_assert!(pair[0].1 > pair[1].1 || (pair[0].1 == pair[1].1 && pair[0].0 < pair[1].0));
            }
            let top = top_ngrams(&t, k);
            prop_assert_eq!(&top[..], &all[..k.min(all.len())]);
        }
    }
}
