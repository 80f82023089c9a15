use std::collections::HashSet;
use std::fs;
use std::path::Path;

use super::{ReportError, TopicSummary};

/// Allowed category codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategorySet {
    codes: Vec<String>,
}

impl Default for CategorySet {
    fn default() -> Self {
        CategorySet::new(["C1", "C2", "C3", "C4"])
    }
}

impl CategorySet {
    pub fn new<I, S>(codes: I) -> CategorySet
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut seen = HashSet::new();
        let codes = codes
            .into_iter()
            .map(|c| c.as_ref().trim().to_string())
            .filter(|c| !c.is_empty() && seen.insert(c.clone()))
            .collect();
        CategorySet { codes }
    }

    pub fn contains(&self, code: &str) -> bool {
        self.codes.iter().any(|c| c == code)
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelRow {
    pub topic_id: usize,
    pub label: String,
    pub category: Option<String>,
    /// 1-based line in the source file, for diagnostics.
    pub line: usize,
}

/// Analyst labels: `topic_id<TAB>label<TAB>category` rows, `#` comments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelFile {
    rows: Vec<LabelRow>,
}

impl LabelFile {
    pub fn parse(text: &str, categories: &CategorySet) -> Result<LabelFile, ReportError> {
        let mut rows = Vec::new();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(ReportError::BadLabelRow {
                    line,
                    reason: format!("expected topic_id<TAB>label<TAB>category, got {} field(s)", fields.len()),
                });
            }
            let topic_id: usize = fields[0].parse().map_err(|_| ReportError::BadLabelRow {
                line,
                reason: format!("topic id '{}' is not a non-negative integer", fields[0]),
            })?;
            if !seen.insert(topic_id) {
                return Err(ReportError::DuplicateLabel { line, topic: topic_id });
            }
            let category = match fields.get(2) {
                Some(c) if !c.is_empty() => {
                    if !categories.contains(c) {
                        return Err(ReportError::BadLabelRow {
                            line,
                            reason: format!("category '{c}' not in {:?}", categories.codes()),
                        });
                    }
                    Some(c.to_string())
                }
                _ => None,
            };
            rows.push(LabelRow { topic_id, label: fields[1].to_string(), category, line });
        }
        Ok(LabelFile { rows })
    }

    pub fn read(path: impl AsRef<Path>, categories: &CategorySet) -> Result<LabelFile, ReportError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ReportError::Io { path: path.to_path_buf(), source })?;
        LabelFile::parse(&text, categories)
    }

    pub fn rows(&self) -> &[LabelRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Attaches labels and categories to the matching topics; order and words are untouched.
pub fn apply_labels(summaries: &[TopicSummary], labels: &LabelFile) -> Result<Vec<TopicSummary>, ReportError> {
    let topics = summaries.len();
    let mut out = summaries.to_vec();
    let mut seen = HashSet::new();
    for row in &labels.rows {
        if !seen.insert(row.topic_id) {
            return Err(ReportError::DuplicateLabel { line: row.line, topic: row.topic_id });
        }
        let Some(summary) = out.iter_mut().find(|s| s.topic_id == row.topic_id) else {
            return Err(ReportError::LabelTopicOutOfRange { line: row.line, topic: row.topic_id, topics });
        };
        summary.label = Some(row.label.clone());
        summary.category = row.category.clone();
    }
    Ok(out)
}
