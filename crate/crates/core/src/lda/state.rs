use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LdaConfig, LdaError};
use crate::corpus::Corpus;

/// Sampler state of one Gibbs chain.
///
/// Tokens are stored flat in document order. `word_topic` is laid out word-major
/// (`w * K + k`) so the inner loop over topics reads contiguous memory.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaState {
    topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    words: Vec<u32>,
    doc_bounds: Vec<usize>,
    z: Vec<u32>,
    doc_topic: Vec<u32>,
    word_topic: Vec<u32>,
    topic_totals: Vec<u32>,
    rng: ChaCha8Rng,
}

/// The count tables in their textbook orientation, for comparisons and inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTables {
    /// D×K.
    pub doc_topic: Vec<Vec<u32>>,
    /// K×V.
    pub topic_word: Vec<Vec<u32>>,
    /// K.
    pub topic_totals: Vec<u32>,
    /// D.
    pub doc_lens: Vec<u32>,
}

impl CountTables {
    /// Checks the marginal identities between the tables.
    pub fn check_marginals(&self) -> Result<(), String> {
        for (d, row) in self.doc_topic.iter().enumerate() {
            let s: u32 = row.iter().sum();
            if s != self.doc_lens[d] {
                return Err(format!("doc {d}: sum_k ndk = {s}, nd = {}", self.doc_lens[d]));
            }
        }
        for (k, row) in self.topic_word.iter().enumerate() {
            let s: u32 = row.iter().sum();
            if s != self.topic_totals[k] {
                return Err(format!("topic {k}: sum_w nkw = {s}, nk = {}", self.topic_totals[k]));
            }
        }
        let nk: u64 = self.topic_totals.iter().map(|&c| c as u64).sum();
        let n: u64 = self.doc_lens.iter().map(|&c| c as u64).sum();
        if nk != n {
            return Err(format!("sum_k nk = {nk}, token count = {n}"));
        }
        Ok(())
    }
}

impl LdaState {
    /// Draws every token's topic uniformly with the seeded generator.
    pub fn init(corpus: &Corpus, cfg: &LdaConfig) -> Result<LdaState, LdaError> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let n = corpus.num_tokens();
        if cfg.topics > n {
            log::warn!("{} topics for only {} tokens; some topics will stay empty", cfg.topics, n);
        }
        let k = cfg.topics as u32;
        let z: Vec<u32> = (0..n).map(|_| rng.random_range(0..k)).collect();
        Ok(Self::assemble(corpus, cfg, z, rng))
    }

    /// Builds a state from explicit per-document assignments.
    pub fn from_assignments(corpus: &Corpus, cfg: &LdaConfig, z: &[Vec<u32>]) -> Result<LdaState, LdaError> {
        cfg.validate()?;
        if z.len() != corpus.num_docs() {
            return Err(LdaError::BadAssignments(format!("{} documents, {} assignment rows", corpus.num_docs(), z.len())));
        }
        for (d, (row, doc)) in z.iter().zip(corpus.docs()).enumerate() {
            if row.len() != doc.len() {
                return Err(LdaError::BadAssignments(format!("doc {d}: {} tokens, {} assignments", doc.len(), row.len())));
            }
            if let Some(&t) = row.iter().find(|&&t| t as usize >= cfg.topics) {
                return Err(LdaError::BadAssignments(format!("doc {d}: topic {t} >= K = {}", cfg.topics)));
            }
        }
        let flat = z.iter().flatten().copied().collect();
        Ok(Self::assemble(corpus, cfg, flat, ChaCha8Rng::seed_from_u64(cfg.seed)))
    }

    fn assemble(corpus: &Corpus, cfg: &LdaConfig, z: Vec<u32>, rng: ChaCha8Rng) -> LdaState {
        let mut doc_bounds = Vec::with_capacity(corpus.num_docs() + 1);
        doc_bounds.push(0);
        let mut words = Vec::with_capacity(corpus.num_tokens());
        for doc in corpus.docs() {
            words.extend_from_slice(doc);
            doc_bounds.push(words.len());
        }
        let mut state = LdaState {
            topics: cfg.topics,
            vocab_size: corpus.vocab_size(),
            alpha: cfg.alpha,
            beta: cfg.beta,
            words,
            doc_bounds,
            z,
            doc_topic: Vec::new(),
            word_topic: Vec::new(),
            topic_totals: Vec::new(),
            rng,
        };
        state.rebuild_counts();
        state
    }

    fn rebuild_counts(&mut self) {
        let k = self.topics;
        self.doc_topic = vec![0; self.num_docs() * k];
        self.word_topic = vec![0; self.vocab_size * k];
        self.topic_totals = vec![0; k];
        for d in 0..self.num_docs() {
            for pos in self.doc_bounds[d]..self.doc_bounds[d + 1] {
                let (w, t) = (self.words[pos] as usize, self.z[pos] as usize);
                self.doc_topic[d * k + t] += 1;
                self.word_topic[w * k + t] += 1;
                self.topic_totals[t] += 1;
            }
        }
    }

    pub fn num_topics(&self) -> usize {
        self.topics
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn num_docs(&self) -> usize {
        self.doc_bounds.len() - 1
    }

    pub fn num_tokens(&self) -> usize {
        self.words.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Topic assignments of document `d`.
    pub fn assignments(&self, d: usize) -> &[u32] {
        &self.z[self.doc_bounds[d]..self.doc_bounds[d + 1]]
    }

    /// All assignments, flat in document order.
    pub fn flat_assignments(&self) -> &[u32] {
        &self.z
    }

    pub fn doc_len(&self, d: usize) -> usize {
        self.doc_bounds[d + 1] - self.doc_bounds[d]
    }

    pub fn doc_topic_count(&self, d: usize, k: usize) -> u32 {
        self.doc_topic[d * self.topics + k]
    }

    pub fn topic_word_count(&self, k: usize, w: usize) -> u32 {
        self.word_topic[w * self.topics + k]
    }

    pub fn topic_total(&self, k: usize) -> u32 {
        self.topic_totals[k]
    }

    /// The incrementally maintained tables.
    pub fn counts(&self) -> CountTables {
        let k = self.topics;
        CountTables {
            doc_topic: self.doc_topic.chunks(k).map(<[u32]>::to_vec).collect(),
            topic_word: (0..k).map(|t| (0..self.vocab_size).map(|w| self.word_topic[w * k + t]).collect()).collect(),
            topic_totals: self.topic_totals.clone(),
            doc_lens: (0..self.num_docs()).map(|d| self.doc_len(d) as u32).collect(),
        }
    }

    /// Tables tallied from scratch out of the assignments.
    pub fn recount(&self) -> CountTables {
        let mut fresh = self.clone();
        fresh.rebuild_counts();
        fresh.counts()
    }

    /// Full conditional over topics for token `i` of document `d`, with that token
    /// removed from every count.
    pub fn conditional(&self, d: usize, i: usize) -> Vec<f64> {
        let pos = self.doc_bounds[d] + i;
        assert!(pos < self.doc_bounds[d + 1], "token {i} out of range for document {d}");
        let k = self.topics;
        let (w, cur) = (self.words[pos] as usize, self.z[pos] as usize);
        let vbeta = self.vocab_size as f64 * self.beta;
        let mut p: Vec<f64> = (0..k)
            .map(|t| {
                let held = u32::from(t == cur);
                let ndk = (self.doc_topic[d * k + t] - held) as f64;
                let nkw = (self.word_topic[w * k + t] - held) as f64;
                let nk = (self.topic_totals[t] - held) as f64;
                (ndk + self.alpha) * (nkw + self.beta) / (nk + vbeta)
            })
            .collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        p
    }

    /// One pass resampling every token, documents in order and positions in order.
    pub fn sweep(&mut self) {
        let k = self.topics;
        let alpha = self.alpha;
        let beta = self.beta;
        let vbeta = self.vocab_size as f64 * beta;
        let mut cumulative = vec![0.0f64; k];
        let LdaState { words, doc_bounds, z, doc_topic, word_topic, topic_totals, rng, .. } = self;

        for d in 0..doc_bounds.len() - 1 {
            let doc_row = d * k;
            for pos in doc_bounds[d]..doc_bounds[d + 1] {
                let w = words[pos] as usize * k;
                let old = z[pos] as usize;
                doc_topic[doc_row + old] -= 1;
                word_topic[w + old] -= 1;
                topic_totals[old] -= 1;

                let dt = &doc_topic[doc_row..doc_row + k];
                let wt = &word_topic[w..w + k];
                let mut total = 0.0;
                for t in 0..k {
                    total += (dt[t] as f64 + alpha) * (wt[t] as f64 + beta) / (topic_totals[t] as f64 + vbeta);
                    cumulative[t] = total;
                }
                let u = rng.random::<f64>() * total;
                let new = cumulative.iter().position(|&c| u < c).unwrap_or(k - 1);

                z[pos] = new as u32;
                doc_topic[doc_row + new] += 1;
                word_topic[w + new] += 1;
                topic_totals[new] += 1;
            }
        }
    }

    /// Renames topic `t` to `perm[t]` in the assignments and every table.
    pub fn permute_topics(&mut self, perm: &[usize]) -> Result<(), LdaError> {
        let k = self.topics;
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(LdaError::BadAssignments(format!("{perm:?} is not a permutation of 0..{k}")));
        }
        for t in &mut self.z {
            *t = perm[*t as usize] as u32;
        }
        let permute_rows = |table: &mut Vec<u32>| {
            let old = table.clone();
            for (row, chunk) in old.chunks(k).enumerate() {
                for (t, &c) in chunk.iter().enumerate() {
                    table[row * k + perm[t]] = c;
                }
            }
        };
        permute_rows(&mut self.doc_topic);
        permute_rows(&mut self.word_topic);
        permute_rows(&mut self.topic_totals);
        Ok(())
    }
}
