use std::io::{BufRead, Write};

use super::{LdaConfig, LdaError, LdaState, TRACE_EVERY};
use crate::corpus::{Corpus, Vocabulary};

/// Point estimates read out of the final state of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    /// K×V, rows sum to 1.
    pub phi: Vec<Vec<f64>>,
    /// D×K, rows sum to 1.
    pub theta: Vec<Vec<f64>>,
    pub final_ll: f64,
    pub config: LdaConfig,
    pub vocab: Vocabulary,
    pub doc_ids: Vec<String>,
    /// `(sweep, log-likelihood)` at sweep 0, every `TRACE_EVERY` sweeps, and the last sweep.
    pub ll_trace: Vec<(usize, f64)>,
}

impl TrainedModel {
    pub fn num_topics(&self) -> usize {
        self.phi.len()
    }

    /// Smoothed estimates `phi[k][w] = (n_kw + β) / (n_k + Vβ)` and
    /// `theta[d][k] = (n_dk + α) / (n_d + Kα)` from the current state.
    pub fn from_state(state: &LdaState, corpus: &Corpus, config: LdaConfig, ll_trace: Vec<(usize, f64)>) -> TrainedModel {
        let (k, v) = (state.num_topics(), state.vocab_size());
        let (alpha, beta) = (state.alpha(), state.beta());
        let phi = (0..k)
            .map(|t| {
                let denom = state.topic_total(t) as f64 + v as f64 * beta;
                (0..v).map(|w| (state.topic_word_count(t, w) as f64 + beta) / denom).collect()
            })
            .collect();
        let theta = (0..state.num_docs())
            .map(|d| {
                let denom = state.doc_len(d) as f64 + k as f64 * alpha;
                (0..k).map(|t| (state.doc_topic_count(d, t) as f64 + alpha) / denom).collect()
            })
            .collect();
        TrainedModel {
            phi,
            theta,
            final_ll: state.log_likelihood(),
            config,
            vocab: corpus.vocab().clone(),
            doc_ids: corpus.doc_ids().to_vec(),
            ll_trace,
        }
    }
}

/// Runs one chain for `cfg.iterations` sweeps and reads out the final state.
///
/// Burn-in does not change the estimates, which come from the last sweep; it is
/// validated here and honored by callers that average over the chain.
pub fn train(corpus: &Corpus, cfg: &LdaConfig) -> Result<TrainedModel, LdaError> {
    let mut state = LdaState::init(corpus, cfg)?;
    let mut trace = vec![(0, state.log_likelihood())];
    for sweep in 1..=cfg.iterations {
        state.sweep();
        if sweep % TRACE_EVERY == 0 || sweep == cfg.iterations {
            let ll = state.log_likelihood();
            log::debug!("K={} sweep {sweep}: log-likelihood {ll:.4}", cfg.topics);
            trace.push((sweep, ll));
        }
    }
    Ok(TrainedModel::from_state(&state, corpus, *cfg, trace))
}

/// `sweep<TAB>log_likelihood` lines.
pub fn write_ll_trace<W: Write>(model: &TrainedModel, mut out: W) -> std::io::Result<()> {
    writeln!(out, "sweep\tlog_likelihood")?;
    for (sweep, ll) in &model.ll_trace {
        writeln!(out, "{sweep}\t{ll:.10}")?;
    }
    Ok(())
}

/// Writes the text model dump: a `K V alpha beta seed` header, K rows of phi,
/// then D rows of theta, values in scientific notation with 17 significant digits.
pub fn write_model_dump<W: Write>(model: &TrainedModel, mut out: W) -> std::io::Result<()> {
    let cfg = &model.config;
    writeln!(out, "{} {} {} {} {}", model.num_topics(), model.vocab.len(), cfg.alpha, cfg.beta, cfg.seed)?;
    for row in model.phi.iter().chain(&model.theta) {
        let line: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Parsed form of a model dump.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelDump {
    pub topics: usize,
    pub vocab_size: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub phi: Vec<Vec<f64>>,
    pub theta: Vec<Vec<f64>>,
}

pub fn read_model_dump<R: BufRead>(input: R) -> Result<ModelDump, LdaError> {
    let bad = |msg: String| LdaError::MalformedDump(msg);
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| bad("missing header".into()))??;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 {
        return Err(bad(format!("header has {} fields, expected 5", fields.len())));
    }
    let parse_err = |what: &str| bad(format!("header field '{what}' is invalid"));
    let topics: usize = fields[0].parse().map_err(|_| parse_err("K"))?;
    let vocab_size: usize = fields[1].parse().map_err(|_| parse_err("V"))?;
    let alpha: f64 = fields[2].parse().map_err(|_| parse_err("alpha"))?;
    let beta: f64 = fields[3].parse().map_err(|_| parse_err("beta"))?;
    let seed: u64 = fields[4].parse().map_err(|_| parse_err("seed"))?;

    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad(format!("line {}: '{x}' is not a number", i + 2))))
            .collect::<Result<_, _>>()?;
        rows.push(row);
    }
    if rows.len() < topics {
        return Err(bad(format!("{} rows, expected at least K = {topics}", rows.len())));
    }
    let theta = rows.split_off(topics);
    if let Some(r) = rows.iter().position(|r| r.len() != vocab_size) {
        return Err(bad(format!("phi row {r} does not have V = {vocab_size} values")));
    }
    if let Some(r) = theta.iter().position(|r| r.len() != topics) {
        return Err(bad(format!("theta row {r} does not have K = {topics} values")));
    }
    Ok(ModelDump { topics, vocab_size, alpha, beta, seed, phi: rows, theta })
}
