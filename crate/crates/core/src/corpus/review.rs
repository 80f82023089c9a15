use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use serde_json::Value;

use super::CorpusError;

/// One rated consumer review.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Review {
    pub id: String,
    /// Star count in `1..=5`.
    pub rating: u8,
    pub text: String,
}

/// Reviews in input-file order, plus where they came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReviewSet {
    reviews: Vec<Review>,
    source: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Jsonl,
}

impl InputFormat {
    /// Guess the format from a file extension; anything but `.jsonl`/`.json`/`.ndjson` is CSV.
    pub fn from_path(path: &Path) -> InputFormat {
        match path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()) {
            Some(e) if e == "jsonl" || e == "json" || e == "ndjson" => InputFormat::Jsonl,
            _ => InputFormat::Csv,
        }
    }
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "jsonl" => Ok(InputFormat::Jsonl),
            other => Err(format!("unknown input format '{other}' (expected csv or jsonl)")),
        }
    }
}

impl ReviewSet {
    /// Builds a set from in-memory reviews. Ids must be unique and ratings in `1..=5`.
    pub fn new(reviews: Vec<Review>, source: impl Into<String>) -> Result<ReviewSet, CorpusError> {
        let mut seen = HashSet::with_capacity(reviews.len());
        for (i, r) in reviews.iter().enumerate() {
            if !(1..=5).contains(&r.rating) {
                return Err(CorpusError::MalformedRow { row: i + 1, reason: format!("rating {} outside 1..=5", r.rating) });
            }
            if !seen.insert(r.id.as_str()) {
                return Err(CorpusError::MalformedRow { row: i + 1, reason: format!("duplicate review id '{}'", r.id) });
            }
        }
        Ok(ReviewSet { reviews, source: source.into() })
    }

    pub fn reviews(&self) -> &[Review] {
        &self.reviews
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.reviews.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reviews.is_empty()
    }

    /// Keeps reviews whose rating lies in `[min_stars, max_stars]`, preserving order.
    pub fn filter_by_rating(&self, min_stars: u8, max_stars: u8) -> Result<ReviewSet, CorpusError> {
        if min_stars > max_stars {
            return Err(CorpusError::InvertedRatingBounds { min: min_stars, max: max_stars });
        }
        if min_stars < 1 || max_stars > 5 {
            return Err(CorpusError::RatingBoundsOutOfRange { min: min_stars, max: max_stars });
        }
        let reviews = self.reviews.iter().filter(|r| (min_stars..=max_stars).contains(&r.rating)).cloned().collect();
        Ok(ReviewSet { reviews, source: self.source.clone() })
    }
}

/// Reads a review file. Rows with a rating outside `1..=5` are skipped with a warning;
/// any other malformed row is an error carrying its row number.
pub fn load_reviews(path: impl AsRef<Path>, format: InputFormat) -> Result<ReviewSet, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    let source = path.display().to_string();
    match format {
        InputFormat::Csv => read_csv(file, path, source),
        InputFormat::Jsonl => read_jsonl(BufReader::new(file), path, source),
    }
}

/// Pushes a parsed row into `out`, enforcing the rating range and id uniqueness.
fn accept_row(
    out: &mut Vec<Review>,
    seen: &mut HashSet<String>,
    row: usize,
    id: String,
    rating: i64,
    text: String,
) -> Result<(), CorpusError> {
    if !(1..=5).contains(&rating) {
        log::warn!("row {row}: rating {rating} outside 1..=5, skipping review '{id}'");
        return Ok(());
    }
    if !seen.insert(id.clone()) {
        return Err(CorpusError::MalformedRow { row, reason: format!("duplicate review id '{id}'") });
    }
    out.push(Review { id, rating: rating as u8, text });
    Ok(())
}

fn read_csv<R: Read>(reader: R, path: &Path, source: String) -> Result<ReviewSet, CorpusError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let column = |name: &str| -> Result<usize, CorpusError> {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| CorpusError::MissingColumn { path: path.to_path_buf(), column: name.to_string() })
    };
    let (id_col, rating_col, text_col) = (column("id")?, column("rating")?, column("text")?);

    let mut reviews = Vec::new();
    let mut seen = HashSet::new();
    for (i, record) in rdr.records().enumerate() {
        // Header is row 0; data rows count from 1.
        let row = i + 1;
        let record = record.map_err(|e| CorpusError::MalformedRow { row, reason: e.to_string() })?;
        let field = |col: usize| record.get(col).unwrap_or("");
        let rating: i64 = field(rating_col).trim().parse().map_err(|_| CorpusError::MalformedRow {
            row,
            reason: format!("rating '{}' is not an integer", field(rating_col)),
        })?;
        accept_row(&mut reviews, &mut seen, row, field(id_col).to_string(), rating, field(text_col).to_string())?;
    }
    Ok(ReviewSet { reviews, source })
}

fn csv_error(path: &Path, e: csv::Error) -> CorpusError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(source) => CorpusError::Io { path: path.to_path_buf(), source },
            _ => unreachable!(),
        }
    } else {
        CorpusError::MalformedRow { row: 0, reason: e.to_string() }
    }
}

fn read_jsonl<R: BufRead>(reader: R, path: &Path, source: String) -> Result<ReviewSet, CorpusError> {
    let mut reviews = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let row = i + 1;
        let line = line.map_err(|source| CorpusError::Io { path: PathBuf::from(path), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| CorpusError::MalformedRow { row, reason };
        let value: Value = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        let id = match value.get("id") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => return Err(malformed("missing or non-scalar 'id'".into())),
        };
        let rating = match value.get("rating") {
            Some(Value::Number(n)) => n.as_i64().ok_or_else(|| malformed(format!("rating {n} is not an integer")))?,
            Some(Value::String(s)) => s.trim().parse().map_err(|_| malformed(format!("rating '{s}' is not an integer")))?,
            _ => return Err(malformed("missing 'rating'".into())),
        };
        let text = match value.get("text") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Null) | None => String::new(),
            _ => return Err(malformed("'text' is not a string".into())),
        };
        accept_row(&mut reviews, &mut seen, row, id, rating, text)?;
    }
    Ok(ReviewSet { reviews, source })
}
