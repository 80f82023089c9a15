//! Shared fixtures: planted-topic corpora, tiny random corpora, and an exact
//! posterior by enumeration that shares no code with the sampler.

#![allow(dead_code)]

use std::io::Write;

use complaint_topics::corpus::{Corpus, Vocabulary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

/// Alphabetic word for an id, safe from the stopword list and the length filter.
pub fn word(id: usize) -> String {
    let mut s = String::from("zq");
    let mut x = id;
    for _ in 0..3 {
        s.push((b'a' + (x % 26) as u8) as char);
        x /= 26;
    }
    s
}

pub struct Planted {
    pub docs: Vec<Vec<usize>>,
    /// K×V ground-truth topics.
    pub phi: Vec<Vec<f64>>,
}

impl Planted {
    pub fn corpus(&self) -> Corpus {
        let mut vocab = Vocabulary::new();
        for w in 0..self.phi[0].len() {
            vocab.intern(&word(w));
        }
        Corpus::from_encoded(vocab, self.docs.iter().map(|d| d.iter().map(|&w| w as u32).collect()).collect()).unwrap()
    }

    /// Same documents as an `id,rating,text` CSV with 1- and 2-star ratings.
    pub fn write_csv(&self, path: &std::path::Path) {
        let mut f = std::fs::File::create(path).unwrap();
        writeln!(f, "id,rating,text").unwrap();
        for (i, doc) in self.docs.iter().enumerate() {
            let text: Vec<String> = doc.iter().map(|&w| word(w)).collect();
            writeln!(f, "p{i},{},\"{}\"", 1 + i % 2, text.join(" ")).unwrap();
        }
    }
}

/// `topics` topics over disjoint blocks of `vocab / topics` words; within a block the
/// word weights are Dirichlet(1). Each document mixes topics with Dirichlet(`doc_conc`).
pub fn planted(seed: u64, topics: usize, vocab: usize, docs: usize, doc_len: usize, doc_conc: f64) -> Planted {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = vocab / topics;
    let phi: Vec<Vec<f64>> = (0..topics)
        .map(|t| {
            let weights = dirichlet(1.0, block, &mut rng);
            let mut row = vec![0.0; vocab];
            row[t * block..(t + 1) * block].copy_from_slice(&weights);
            row
        })
        .collect();
    let docs = (0..docs)
        .map(|_| {
            let theta = dirichlet(doc_conc, topics, &mut rng);
            (0..doc_len)
                .map(|_| {
                    let t = draw(&theta, &mut rng);
                    draw(&phi[t], &mut rng)
                })
                .collect()
        })
        .collect();
    Planted { docs, phi }
}

/// Symmetric Dirichlet draw via normalized Gamma variates.
fn dirichlet(conc: f64, dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    let gamma = Gamma::new(conc, 1.0).unwrap();
    let g: Vec<f64> = (0..dim).map(|_| gamma.sample(rng)).collect();
    let total: f64 = g.iter().sum();
    g.into_iter().map(|x| x / total).collect()
}

fn draw(p: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &x) in p.iter().enumerate() {
        acc += x;
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Greedy one-to-one matching of truth rows to learned rows by cosine similarity,
/// returning the similarity of each matched truth topic.
pub fn greedy_match(truth: &[Vec<f64>], learned: &[Vec<f64>]) -> Vec<f64> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, t) in truth.iter().enumerate() {
        for (j, l) in learned.iter().enumerate() {
            pairs.push((cosine(t, l), i, j));
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (mut used_t, mut used_l) = (vec![false; truth.len()], vec![false; learned.len()]);
    let mut sims = vec![0.0; truth.len()];
    for (s, i, j) in pairs {
        if !used_t[i] && !used_l[j] {
            used_t[i] = true;
            used_l[j] = true;
            sims[i] = s;
        }
    }
    sims
}

/// Random small corpus: `docs` nonempty documents over `vocab` words with at most
/// `max_tokens` tokens overall.
pub fn tiny_corpus(seed: u64, docs: usize, vocab: usize, max_tokens: usize) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lens = vec![1usize; docs];
    let extra = rng.random_range(0..=max_tokens - docs);
    for _ in 0..extra {
        lens[rng.random_range(0..docs)] += 1;
    }
    lens.iter().map(|&n| (0..n).map(|_| rng.random_range(0..vocab as u32)).collect()).collect()
}

pub fn encoded_corpus(docs: &[Vec<u32>], vocab: usize) -> Corpus {
    let mut v = Vocabulary::new();
    for w in 0..vocab {
        v.intern(&word(w));
    }
    Corpus::from_encoded(v, docs.to_vec()).unwrap()
}

/// `ln P(w, z)` and `ln P(w | z)` by the sequential Pólya-urn product: tokens are
/// added one at a time and each contributes its predictive probability.
pub fn urn_log_probs(docs: &[Vec<u32>], z: &[Vec<u32>], k: usize, v: usize, alpha: f64, beta: f64) -> (f64, f64) {
    let mut ndk = vec![vec![0.0; k]; docs.len()];
    let mut nd = vec![0.0; docs.len()];
    let mut nkw = vec![vec![0.0; v]; k];
    let mut nk = vec![0.0; k];
    let (mut log_z, mut log_w) = (0.0, 0.0);
    for (d, doc) in docs.iter().enumerate() {
        for (i, &w) in doc.iter().enumerate() {
            let (t, w) = (z[d][i] as usize, w as usize);
            log_z += ((ndk[d][t] + alpha) / (nd[d] + k as f64 * alpha)).ln();
            log_w += ((nkw[t][w] + beta) / (nk[t] + v as f64 * beta)).ln();
            ndk[d][t] += 1.0;
            nd[d] += 1.0;
            nkw[t][w] += 1.0;
            nk[t] += 1.0;
        }
    }
    (log_z + log_w, log_w)
}

/// Every assignment of `n` tokens to `k` topics, as a flat index in base `k`.
pub fn unflatten(mut index: usize, shape: &[usize], k: usize) -> Vec<Vec<u32>> {
    shape
        .iter()
        .map(|&len| {
            (0..len)
                .map(|_| {
                    let t = (index % k) as u32;
                    index /= k;
                    t
                })
                .collect()
        })
        .collect()
}

pub fn flatten(z: &[u32], k: usize) -> usize {
    z.iter().rev().fold(0, |acc, &t| acc * k + t as usize)
}

/// Exact posterior `P(z | w)` over all `k^N` assignments, indexed like [`flatten`].
pub fn exact_posterior(docs: &[Vec<u32>], k: usize, v: usize, alpha: f64, beta: f64) -> Vec<f64> {
    let shape: Vec<usize> = docs.iter().map(Vec::len).collect();
    let n: usize = shape.iter().sum();
    let states = k.pow(n as u32);
    let logs: Vec<f64> = (0..states).map(|s| urn_log_probs(docs, &unflatten(s, &shape, k), k, v, alpha, beta).0).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
