use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ReportError, TopicSummary};

pub const TSV_HEADER: &str = "topic\tlabel\tcategory\twords";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Tsv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(ReportFormat::Tsv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format '{other}' (expected tsv or json)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonWord {
    word: String,
    prob: f64,
}

#[derive(Serialize, Deserialize)]
struct JsonTopic {
    topic: usize,
    label: Option<String>,
    category: Option<String>,
    words: Vec<JsonWord>,
}

fn clean(field: &str) -> String {
    field.replace(['\t', '\n', '\r'], " ")
}

/// Renders the report. TSV probabilities carry four decimals; JSON keeps full precision.
pub fn write_report<W: Write>(summaries: &[TopicSummary], format: ReportFormat, mut out: W) -> Result<(), ReportError> {
    let io = |source| ReportError::Io { path: "<report>".into(), source };
    match format {
        ReportFormat::Tsv => {
            writeln!(out, "{TSV_HEADER}").map_err(io)?;
            for s in summaries {
                let words: Vec<String> = s.top_words.iter().map(|(w, p)| format!("{w}:{p:.4}")).collect();
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    s.topic_id,
                    clean(s.label.as_deref().unwrap_or("")),
                    clean(s.category.as_deref().unwrap_or("")),
                    words.join(" ")
                )
                .map_err(io)?;
            }
        }
        ReportFormat::Json => {
            let rows: Vec<JsonTopic> = summaries
                .iter()
                .map(|s| JsonTopic {
                    topic: s.topic_id,
                    label: s.label.clone(),
                    category: s.category.clone(),
                    words: s.top_words.iter().map(|(w, p)| JsonWord { word: w.clone(), prob: *p }).collect(),
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out).map_err(io)?;
        }
    }
    out.flush().map_err(io)
}

pub fn export_report(summaries: &[TopicSummary], path: impl AsRef<Path>, format: ReportFormat) -> Result<(), ReportError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| ReportError::Io { path: path.to_path_buf(), source })?;
    write_report(summaries, format, BufWriter::new(file)).map_err(|e| match e {
        ReportError::Io { source, .. } => ReportError::Io { path: path.to_path_buf(), source },
        other => other,
    })
}

/// Parses a rendered report. Lines starting with `#` are ignored in TSV.
pub fn parse_report(text: &str, format: ReportFormat) -> Result<Vec<TopicSummary>, ReportError> {
    match format {
        ReportFormat::Json => {
            let rows: Vec<JsonTopic> = serde_json::from_str(text)?;
            Ok(rows
                .into_iter()
                .map(|r| TopicSummary {
                    topic_id: r.topic,
                    top_words: r.words.into_iter().map(|w| (w.word, w.prob)).collect(),
                    label: r.label,
                    category: r.category,
                })
                .collect())
        }
        ReportFormat::Tsv => {
            let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
            match lines.next() {
                Some((_, header)) if header == TSV_HEADER => {}
                Some((i, _)) => return Err(ReportError::BadReport { line: i + 1, reason: "missing header".into() }),
                None => return Ok(Vec::new()),
            }
            lines.map(|(i, l)| parse_tsv_row(l).map_err(|reason| ReportError::BadReport { line: i + 1, reason })).collect()
        }
    }
}

fn parse_tsv_row(line: &str) -> Result<TopicSummary, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 fields, got {}", fields.len()));
    }
    let topic_id = fields[0].parse().map_err(|_| format!("bad topic id '{}'", fields[0]))?;
    let optional = |s: &str| (!s.is_empty()).then(|| s.to_string());
    let top_words = fields[3]
        .split_whitespace()
        .map(|pair| {
            let (w, p) = pair.rsplit_once(':').ok_or_else(|| format!("'{pair}' is not word:prob"))?;
            let p: f64 = p.parse().map_err(|_| format!("bad probability in '{pair}'"))?;
            Ok((w.to_string(), p))
        })
        .collect::<Result<_, String>>()?;
    Ok(TopicSummary { topic_id, top_words, label: optional(fields[1]), category: optional(fields[2]) })
}

pub fn read_report(path: impl AsRef<Path>, format: ReportFormat) -> Result<Vec<TopicSummary>, ReportError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io { path: path.to_path_buf(), source })?;
    parse_report(&text, format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labeled() -> Vec<TopicSummary> {
        vec![TopicSummary {
            topic_id: 0,
            top_words: vec![("rental".into(), 0.12345), ("claim".into(), 0.0999)],
            label: Some("Rental Car & Deductible".into()),
            category: Some("C2".into()),
        }]
    }

    #[test]
    fn one_labeled_topic_tsv() {
        let mut buf = Vec::new();
        write_report(&labeled(), ReportFormat::Tsv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "topic\tlabel\tcategory\twords\n0\tRental Car & Deductible\tC2\trental:0.1235 claim:0.0999\n");
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for (format, name) in [(ReportFormat::Tsv, "r.tsv"), (ReportFormat::Json, "r.json")] {
            let path = dir.path().join(name);
            export_report(&labeled(), &path, format).unwrap();
            let back = read_report(&path, format).unwrap();
            assert_eq!(back.len(), 1);
            assert_eq!(back[0].label, labeled()[0].label);
            assert!((back[0].top_words[0].1 - 0.12345).abs() <= 1e-4);
        }
    }

    #[test]
    fn tsv_comments_and_errors() {
        let text = "# note\ntopic\tlabel\tcategory\twords\n3\t\t\tfoo:0.5000\n# C1\t1\n";
        let back = parse_report(text, ReportFormat::Tsv).unwrap();
        assert_eq!(back[0].topic_id, 3);
        assert_eq!(back[0].label, None);
        assert!(parse_report("nope\n", ReportFormat::Tsv).is_err());
        assert!(parse_report("topic\tlabel\tcategory\twords\n1\tx\tC1\tfoo\n", ReportFormat::Tsv).is_err());
    }

    fn summaries() -> impl Strategy<Value = Vec<TopicSummary>> {
        let topic = (
            proptest::collection::vec(("[a-z]{3,8}", 0.0f64..1.0), 1..6),
            proptest::option::of("[A-Za-z &/]{1,20}"),
            proptest::option::of("C[1-4]"),
        );
        proptest::collection::vec(topic, 0..5).prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (words, label, category))| TopicSummary {
                    topic_id: i,
                    top_words: words,
                    label: label.filter(|l| !l.trim().is_empty()).map(|l| l.trim().to_string()),
                    category,
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn round_trip_up_to_formatting(s in summaries(), json in any::<bool>()) {
            let format = if json { ReportFormat::Json } else { ReportFormat::Tsv };
            let mut buf = Vec::new();
            write_report(&s, format, &mut buf).unwrap();
            let back = parse_report(std::str::from_utf8(&buf).unwrap(), format).unwrap();
            prop_assert_eq!(back.len(), s.len());
            for (a, b) in s.iter().zip(&back) {
                prop_assert_eq!(a.topic_id, b.topic_id);
                prop_assert_eq!(&a.label, &b.label);
                prop_assert_eq!(&a.category, &b.category);
                prop_assert_eq!(a.top_words.len(), b.top_words.len());
                for ((wa, pa), (wb, pb)) in a.top_words.iter().zip(&b.top_words) {
                    prop_assert_eq!(wa, wb);
                    prop_assert!((pa - pb).abs() <= 5e-5 + 1e-12);
                }
            }
        }
    }
}
