use std::collections::HashSet;
use std::fs;
use std::path::Path;

use super::CorpusError;

const BUNDLED_STOPWORDS: &str = include_str!("stopwords_en.txt");

/// Tokenizer settings.
///
/// Text is split on every non-alphabetic character and only runs of ASCII
/// letters survive, so `café` and `x2` are discarded rather than truncated.
#[derive(Debug, Clone)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub min_token_len: usize,
    stopwords: HashSet<String>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig { lowercase: true, min_token_len: 3, stopwords: parse_word_list(BUNDLED_STOPWORDS).collect() }
    }
}

impl TokenizerConfig {
    /// Default rules with a replacement stopword list.
    pub fn with_stopwords<I, S>(words: I) -> TokenizerConfig
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut cfg = TokenizerConfig { stopwords: HashSet::new(), ..TokenizerConfig::default() };
        cfg.set_stopwords(words);
        cfg
    }

    /// Loads a stopword file: one word per line, `#` comments and blank lines ignored.
    pub fn with_stopwords_file(path: impl AsRef<Path>) -> Result<TokenizerConfig, CorpusError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
        Ok(TokenizerConfig::with_stopwords(parse_word_list(&text)))
    }

    pub fn set_stopwords<I, S>(&mut self, words: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let lowercase = self.lowercase;
        self.stopwords = words.into_iter().map(|w| normalize(w.as_ref().trim(), lowercase)).filter(|w| !w.is_empty()).collect();
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }
}

fn normalize(word: &str, lowercase: bool) -> String {
    if lowercase {
        word.to_lowercase()
    } else {
        word.to_string()
    }
}

/// Non-comment, non-blank lines of a word-list file.
pub fn parse_word_list(text: &str) -> impl Iterator<Item = String> + '_ {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(str::to_string)
}

/// Splits `text` into normalized, stopword-free tokens in source order.
pub fn tokenize(text: &str, cfg: &TokenizerConfig) -> Vec<String> {
    let text = normalize(text, cfg.lowercase);
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| t.len() >= cfg.min_token_len && t.bytes().all(|b| b.is_ascii_alphabetic()))
        .filter(|t| !cfg.stopwords.contains(*t))
        .map(str::to_string)
        .collect()
}
