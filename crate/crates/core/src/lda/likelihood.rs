use super::{CountTables, LdaState};

/// Natural log of the gamma function for positive arguments (Lanczos approximation).
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `log P(w | z)` with the topic–word distributions integrated out:
///
/// `K [lnΓ(Vβ) − V lnΓ(β)] + Σ_k [Σ_w lnΓ(n_kw + β) − lnΓ(n_k + Vβ)]`.
///
/// Each topic's term is evaluated as `Σ_{w: n_kw > 0} [lnΓ(n_kw + β) − lnΓ(β)] + lnΓ(Vβ) − lnΓ(n_k + Vβ)`,
/// which is algebraically identical but makes an empty topic contribute exactly zero.
/// Topic terms are summed in sorted order so the result does not depend on topic labels.
pub fn log_likelihood(state: &LdaState) -> f64 {
    topic_word_log_likelihood(
        state.num_topics(),
        state.vocab_size(),
        state.beta(),
        |t, w| state.topic_word_count(t, w),
        |t| state.topic_total(t),
    )
}

fn topic_word_log_likelihood(
    k: usize,
    v: usize,
    beta: f64,
    count: impl Fn(usize, usize) -> u32,
    total: impl Fn(usize) -> u32,
) -> f64 {
    let vbeta = v as f64 * beta;
    let lg_beta = ln_gamma(beta);
    let lg_vbeta = ln_gamma(vbeta);

    let mut words = vec![0.0f64; k];
    for w in 0..v {
        for (t, acc) in words.iter_mut().enumerate() {
            let c = count(t, w);
            if c > 0 {
                *acc += ln_gamma(c as f64 + beta) - lg_beta;
            }
        }
    }
    let mut terms: Vec<f64> = words
        .into_iter()
        .enumerate()
        .map(|(t, acc)| {
            let nk = total(t);
            if nk == 0 {
                0.0
            } else {
                acc + (lg_vbeta - ln_gamma(nk as f64 + vbeta))
            }
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

impl CountTables {
    /// `log P(w | z)` of these tables; the vocabulary size is the row length of `topic_word`.
    pub fn log_likelihood(&self, beta: f64) -> f64 {
        let v = self.topic_word.first().map_or(0, Vec::len);
        topic_word_log_likelihood(self.topic_word.len(), v, beta, |t, w| self.topic_word[t][w], |t| self.topic_totals[t])
    }
}

impl LdaState {
    pub fn log_likelihood(&self) -> f64 {
        log_likelihood(self)
    }
}
