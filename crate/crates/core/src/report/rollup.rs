use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use super::{ReportError, TopicSummary};

/// Topic counts per category, with exact fractions over the categorized topics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategorySummary {
    pub counts: BTreeMap<String, usize>,
    pub categorized: usize,
    pub subset: BTreeSet<String>,
    pub subset_count: usize,
}

impl CategorySummary {
    pub fn fraction(&self, category: &str) -> Ratio<usize> {
        Ratio::new(self.counts.get(category).copied().unwrap_or(0), self.categorized)
    }

    pub fn fractions(&self) -> BTreeMap<String, Ratio<usize>> {
        self.counts.keys().map(|c| (c.clone(), self.fraction(c))).collect()
    }

    pub fn subset_fraction(&self) -> Ratio<usize> {
        Ratio::new(self.subset_count, self.categorized)
    }
}

fn to_f64(r: Ratio<usize>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl CategorySummary {
    pub fn subset_fraction_f64(&self) -> f64 {
        to_f64(self.subset_fraction())
    }

    pub fn fraction_f64(&self, category: &str) -> f64 {
        to_f64(self.fraction(category))
    }
}

/// Rolls categorized topics up per category and for the queried `subset`.
pub fn category_summary<S: AsRef<str>>(summaries: &[TopicSummary], subset: &[S]) -> Result<CategorySummary, ReportError> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for cat in summaries.iter().filter_map(|s| s.category.as_ref()) {
        *counts.entry(cat.clone()).or_default() += 1;
    }
    let categorized: usize = counts.values().sum();
    if categorized == 0 {
        return Err(ReportError::NoCategorizedTopics);
    }
    let subset: BTreeSet<String> = subset.iter().map(|s| s.as_ref().to_string()).collect();
    let subset_count = subset.iter().filter_map(|c| counts.get(c)).sum();
    Ok(CategorySummary { counts, categorized, subset, subset_count })
}
