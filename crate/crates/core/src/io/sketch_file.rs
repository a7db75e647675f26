//! JSON sketch files.
//!
//! ```json
//! {
//!   "classifiers": ["x", "y"],
//!   "q": 5,
//!   "counts": { "aa": 2, "ab": 0, "ba": 1, "bb": 2 },
//!   "truth_split": { "aa": [2, 0], "ab": [0, 0], "ba": [0, 1], "bb": [0, 2] }
//! }
//! ```
//!
//! Patterns missing from `counts` (or `truth_split`) count as zero. Files are
//! always written with every pattern in index order, so load followed by
//! save reproduces a saved file byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DecisionPattern, EvaluationSketch, TruthSplit, MAX_CLASSIFIERS};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SketchFile {
    classifiers: Vec<String>,
    q: i64,
    // Equal-length strings over "ab" sort in pattern-index order.
    counts: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truth_split: Option<BTreeMap<String, [i64; 2]>>,
}

fn pattern_index(key: &str, n: usize) -> Result<usize> {
    let p: DecisionPattern = key.parse()?;
    if p.len() != n {
        return Err(Error::Invalid(format!(
            "pattern `{key}` has length {}, expected {n}",
            p.len()
        )));
    }
    Ok(p.index())
}

impl SketchFile {
    fn into_sketch(self) -> Result<EvaluationSketch> {
        let n = self.classifiers.len();
        if n == 0 || n > MAX_CLASSIFIERS {
            return Err(Error::Invalid(format!("unsupported ensemble size {n}")));
        }
        let mut counts = vec![0i64; 1 << n];
        for (key, c) in &self.counts {
            counts[pattern_index(key, n)?] = *c;
        }
        let split = match &self.truth_split {
            None => None,
            Some(map) => {
                let mut split = vec![TruthSplit::default(); 1 << n];
                for (key, [a, b]) in map {
                    split[pattern_index(key, n)?] = TruthSplit::new(*a, *b);
                }
                Some(split)
            }
        };
        EvaluationSketch::from_counts(self.classifiers, self.q, counts, split)
    }

    fn from_sketch(sketch: &EvaluationSketch) -> Self {
        let counts = sketch
            .patterns()
            .map(|(p, c)| (p.to_string(), c))
            .collect();
        let truth_split = sketch.truth_split().map(|split| {
            DecisionPattern::all(sketch.n())
                .zip(split)
                .map(|(p, s)| (p.to_string(), [s.true_a, s.true_b]))
                .collect()
        });
        SketchFile {
            classifiers: sketch.classifier_ids().to_vec(),
            q: sketch.q(),
            counts,
            truth_split,
        }
    }
}

/// Parses a sketch document. Shape errors are rejected; arithmetic
/// consistency is left to [`EvaluationSketch::validate`].
pub fn sketch_from_json(text: &str) -> Result<EvaluationSketch> {
    let file: SketchFile = serde_json::from_str(text)?;
    file.into_sketch()
}

pub fn sketch_to_json(sketch: &EvaluationSketch) -> String {
    let mut s = serde_json::to_string_pretty(&SketchFile::from_sketch(sketch))
        .expect("sketch serialization cannot fail");
    s.push('\n');
    s
}

pub fn load_sketch(path: &Path) -> Result<EvaluationSketch> {
    sketch_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_sketch(sketch: &EvaluationSketch, path: &Path) -> Result<()> {
    super::write_atomic(path, sketch_to_json(sketch).as_bytes())
}
