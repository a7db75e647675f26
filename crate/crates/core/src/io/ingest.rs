//! Reading per-item decisions from CSV or JSON Lines.
//!
//! CSV files have a mandatory header `item_id,<classifier ids...>[,truth]`.
//! JSON Lines records look like
//! `{"item_id": "q1", "responses": {"x": "correct"}, "truth": "incorrect"}`.
//! Source labels are translated through a [`LabelMap`].
//!
//! Items with a missing or empty response are dropped and reported in the
//! [`IngestReport`]; rows that cannot be parsed at all are errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{DecisionRow, DecisionTable, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IngestFormat {
    Csv,
    Jsonl,
}

impl IngestFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<IngestFormat> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(IngestFormat::Csv),
            "jsonl" | "ndjson" => Some(IngestFormat::Jsonl),
            _ => None,
        }
    }
}

impl FromStr for IngestFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(IngestFormat::Csv),
            "jsonl" => Ok(IngestFormat::Jsonl),
            other => Err(Error::Invalid(format!("unknown format `{other}`"))),
        }
    }
}

/// Translation from source label strings to the two labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap(BTreeMap<String, Label>);

impl LabelMap {
    pub fn new() -> Self {
        LabelMap(BTreeMap::new())
    }

    /// Maps `a`/`A` to A and `b`/`B` to B.
    pub fn identity() -> Self {
        let mut m = LabelMap::new();
        for (s, l) in [("a", Label::A), ("A", Label::A), ("b", Label::B), ("B", Label::B)] {
            m.insert(s, l);
        }
        m
    }

    pub fn insert(&mut self, source: impl Into<String>, label: Label) {
        self.0.insert(source.into(), label);
    }

    /// Parses `source=a` or `source=b`.
    pub fn parse_entry(entry: &str) -> Result<(String, Label)> {
        let (src, label) = entry
            .rsplit_once('=')
            .ok_or_else(|| Error::Invalid(format!("label mapping `{entry}` is not SOURCE=LABEL")))?;
        let label = match label.trim() {
            "a" | "A" => Label::A,
            "b" | "B" => Label::B,
            other => return Err(Error::Invalid(format!("target label `{other}` is not a or b"))),
        };
        Ok((src.to_string(), label))
    }

    pub fn get(&self, source: &str) -> Option<Label> {
        self.0.get(source).copied()
    }

    fn map(&self, source: &str, row: usize) -> Result<Label> {
        self.get(source).ok_or_else(|| Error::UnmappedLabel {
            label: source.to_string(),
            row,
        })
    }
}

impl Default for LabelMap {
    fn default() -> Self {
        LabelMap::new()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DroppedItem {
    pub row: usize,
    pub item_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestReport {
    pub table: DecisionTable,
    pub dropped: Vec<DroppedItem>,
}

/// Reads a decision file. `roster`, when given, fixes the classifier order and
/// must be covered by the file; otherwise the order is taken from the file.
pub fn ingest(
    path: &Path,
    format: IngestFormat,
    labels: &LabelMap,
    roster: Option<&[String]>,
) -> Result<IngestReport> {
    let text = fs::read_to_string(path)?;
    match format {
        IngestFormat::Csv => ingest_csv(&text, labels, roster),
        IngestFormat::Jsonl => ingest_jsonl(&text, labels, roster),
    }
}

struct Builder {
    roster: Vec<String>,
    rows: Vec<(usize, DecisionRow)>,
    dropped: Vec<DroppedItem>,
}

impl Builder {
    fn push(&mut self, line: usize, row: DecisionRow) {
        if let Some(k) = row.responses.iter().position(Option::is_none) {
            self.dropped.push(DroppedItem {
                row: line,
                item_id: row.item_id,
                reason: format!("no response from `{}`", self.roster[k]),
            });
        } else {
            self.rows.push((line, row));
        }
    }

    fn finish(mut self) -> Result<IngestReport> {
        self.rows.sort_by(|a, b| a.1.item_id.cmp(&b.1.item_id));
        for w in self.rows.windows(2) {
            if w[0].1.item_id == w[1].1.item_id {
                return Err(Error::Row {
                    row: w[0].0.max(w[1].0),
                    msg: format!("duplicate item_id `{}`", w[1].1.item_id),
                });
            }
        }
        Ok(IngestReport {
            table: DecisionTable {
                classifier_ids: self.roster,
                rows: self.rows.into_iter().map(|(_, r)| r).collect(),
            },
            dropped: self.dropped,
        })
    }
}

fn check_roster(declared: &[String], found: &[String]) -> Result<()> {
    if let Some(missing) = declared.iter().find(|id| !found.contains(id)) {
        return Err(Error::Invalid(format!("no column for classifier `{missing}`")));
    }
    Ok(())
}

pub fn ingest_csv(text: &str, labels: &LabelMap, roster: Option<&[String]>) -> Result<IngestReport> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.first().map(String::as_str) != Some("item_id") {
        return Err(Error::Row {
            row: 1,
            msg: "header must start with `item_id`".into(),
        });
    }
    let truth_col = header.iter().position(|h| h == "truth");
    let in_file: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != 0 && Some(k) != truth_col)
        .map(|(_, h)| h.clone())
        .collect();
    if in_file.is_empty() {
        return Err(Error::Invalid("no classifier columns".into()));
    }
    let roster: Vec<String> = match roster {
        Some(r) => {
            check_roster(r, &in_file)?;
            r.to_vec()
        }
        None => in_file,
    };
    let columns: Vec<usize> = roster
        .iter()
        .map(|id| header.iter().position(|h| h == id).expect("checked above"))
        .collect();

    let mut b = Builder {
        roster,
        rows: Vec::new(),
        dropped: Vec::new(),
    };
    for (k, record) in reader.records().enumerate() {
        let line = k + 2;
        let record = record.map_err(|e| Error::Row {
            row: line,
            msg: e.to_string(),
        })?;
        if record.len() != header.len() {
            return Err(Error::Row {
                row: line,
                msg: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let item_id = record[0].to_string();
        if item_id.is_empty() {
            return Err(Error::Row {
                row: line,
                msg: "empty item_id".into(),
            });
        }
        let mut responses = Vec::with_capacity(columns.len());
        for &c in &columns {
            let v = &record[c];
            responses.push(if v.is_empty() { None } else { Some(labels.map(v, line)?) });
        }
        let truth = match truth_col.map(|c| &record[c]) {
            Some(v) if !v.is_empty() => Some(labels.map(v, line)?),
            _ => None,
        };
        b.push(
            line,
            DecisionRow {
                item_id,
                responses,
                truth,
            },
        );
    }
    b.finish()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRecord {
    item_id: String,
    responses: BTreeMap<String, Option<String>>,
    #[serde(default)]
    truth: Option<String>,
}

pub fn ingest_jsonl(text: &str, labels: &LabelMap, roster: Option<&[String]>) -> Result<IngestReport> {
    let mut records = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: JsonRecord = serde_json::from_str(line).map_err(|e| Error::Row {
            row: k + 1,
            msg: e.to_string(),
        })?;
        records.push((k + 1, rec));
    }
    let roster: Vec<String> = match roster {
        Some(r) => r.to_vec(),
        None => {
            let ids: BTreeSet<&String> = records.iter().flat_map(|(_, r)| r.responses.keys()).collect();
            ids.into_iter().cloned().collect()
        }
    };
    if roster.is_empty() {
        return Err(Error::Invalid("no classifiers in the input".into()));
    }
    let mut b = Builder {
        roster,
        rows: Vec::new(),
        dropped: Vec::new(),
    };
    for (line, rec) in records {
        if let Some(unknown) = rec.responses.keys().find(|id| !b.roster.contains(id)) {
            return Err(Error::Row {
                row: line,
                msg: format!("classifier `{unknown}` is not in the roster"),
            });
        }
        let mut responses = Vec::with_capacity(b.roster.len());
        for id in &b.roster {
            responses.push(match rec.responses.get(id) {
                Some(Some(v)) if !v.is_empty() => Some(labels.map(v, line)?),
                _ => None,
            });
        }
        let truth = match rec.truth.as_deref() {
            Some(v) if !v.is_empty() => Some(labels.map(v, line)?),
            _ => None,
        };
        b.push(
            line,
            DecisionRow {
                item_id: rec.item_id,
                responses,
                truth,
            },
        );
    }
    b.finish()
}
