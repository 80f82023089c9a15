//! Topic reports: ranked top words per topic, analyst labels, and category rollups.

mod export;
mod labels;
mod rollup;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lda::TrainedModel;

pub use export::{export_report, parse_report, read_report, write_report, ReportFormat};
pub use labels::{apply_labels, CategorySet, LabelFile, LabelRow};
pub use rollup::{category_summary, CategorySummary};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("top-word count {n} outside 1..={vocab_size}")]
    TopWordsOutOfRange { n: usize, vocab_size: usize },
    #[error("label file line {line}: {reason}")]
    BadLabelRow { line: usize, reason: String },
    #[error("label file line {line}: topic {topic} is out of range for {topics} topics")]
    LabelTopicOutOfRange { line: usize, topic: usize, topics: usize },
    #[error("label file line {line}: duplicate topic {topic}")]
    DuplicateLabel { line: usize, topic: usize },
    #[error("no categorized topics to summarize")]
    NoCategorizedTopics,
    #[error("report line {line}: {reason}")]
    BadReport { line: usize, reason: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One topic's most probable words, with an optional analyst label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub topic_id: usize,
    /// Probability descending, ties by word.
    pub top_words: Vec<(String, f64)>,
    pub label: Option<String>,
    pub category: Option<String>,
}

/// The `n` most probable words of every topic under `phi`.
pub fn top_words(model: &TrainedModel, n: usize) -> Result<Vec<TopicSummary>, ReportError> {
    let v = model.vocab.len();
    if n == 0 || n > v {
        return Err(ReportError::TopWordsOutOfRange { n, vocab_size: v });
    }
    let words = model.vocab.words();
    Ok(model
        .phi
        .iter()
        .enumerate()
        .map(|(topic_id, row)| {
            let mut ranked: Vec<usize> = (0..v).collect();
            ranked.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then_with(|| words[a].cmp(&words[b])));
            TopicSummary {
                topic_id,
                top_words: ranked.into_iter().take(n).map(|w| (words[w].clone(), row[w])).collect(),
                label: None,
                category: None,
            }
        })
        .collect())
}
