//! Domain types for evaluation sketches: labels, decision patterns, the
//! pattern-count table itself, and the transformations defined on it.
//!
//! Everything here is integer arithmetic. Pattern counts are kept in a dense
//! vector indexed by the pattern's position in lexicographic order over the
//! alphabet `a < b`, with classifier 0 as the most significant position.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, Rational};

/// Largest ensemble the dense pattern table accepts.
pub const MAX_CLASSIFIERS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
}

impl Label {
    pub fn flipped(self) -> Label {
        match self {
            Label::A => Label::B,
            Label::B => Label::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Label::A => 'a',
            Label::B => 'b',
        }
    }

    pub fn from_char(c: char) -> Option<Label> {
        match c {
            'a' | 'A' => Some(Label::A),
            'b' | 'B' => Some(Label::B),
            _ => None,
        }
    }

    fn bit(self) -> usize {
        match self {
            Label::A => 0,
            Label::B => 1,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// The joint responses of an ensemble on one item, one label per classifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecisionPattern(Vec<Label>);

impl DecisionPattern {
    pub fn new(labels: Vec<Label>) -> Self {
        DecisionPattern(labels)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn get(&self, classifier: usize) -> Label {
        self.0[classifier]
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, l| (acc << 1) | l.bit())
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        DecisionPattern(
            (0..n)
                .map(|k| {
                    if (index >> (n - 1 - k)) & 1 == 1 {
                        Label::B
                    } else {
                        Label::A
                    }
                })
                .collect(),
        )
    }

    /// All `2^n` patterns in index order.
    pub fn all(n: usize) -> impl Iterator<Item = DecisionPattern> {
        (0..1usize << n).map(move |i| DecisionPattern::from_index(i, n))
    }

    pub fn count_of(&self, label: Label) -> usize {
        self.0.iter().filter(|l| **l == label).count()
    }
}

impl fmt::Display for DecisionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for DecisionPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                if c == 'a' || c == 'b' {
                    Ok(Label::from_char(c).unwrap())
                } else {
                    Err(Error::Invalid(format!("pattern `{s}` contains `{c}`")))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(DecisionPattern)
    }
}

/// Pattern index with one classifier's coordinate swapped.
fn flip_bit(index: usize, classifier: usize, n: usize) -> usize {
    index ^ (1 << (n - 1 - classifier))
}

/// How a pattern count divides between items whose true label is A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TruthSplit {
    pub true_a: i64,
    pub true_b: i64,
}

impl TruthSplit {
    pub fn new(true_a: i64, true_b: i64) -> Self {
        TruthSplit { true_a, true_b }
    }
}

/// Response counts for one classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marginals {
    pub r_a: i64,
    pub r_b: i64,
}

impl Marginals {
    pub fn q(&self) -> i64 {
        self.r_a + self.r_b
    }

    pub fn get(&self, label: Label) -> i64 {
        match label {
            Label::A => self.r_a,
            Label::B => self.r_b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalSummary {
    pub q: i64,
    pub classifiers: Vec<(String, Marginals)>,
}

/// Joint decision counts for a pair of classifiers, `R_{x_i y_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    pub aa: i64,
    pub ab: i64,
    pub ba: i64,
    pub bb: i64,
}

impl PairCounts {
    pub fn total(&self) -> i64 {
        self.aa + self.ab + self.ba + self.bb
    }

    pub fn marginals_i(&self) -> Marginals {
        Marginals {
            r_a: self.aa + self.ab,
            r_b: self.ba + self.bb,
        }
    }

    pub fn marginals_j(&self) -> Marginals {
        Marginals {
            r_a: self.aa + self.ba,
            r_b: self.ab + self.bb,
        }
    }

    pub fn as_array(&self) -> [i64; 4] {
        [self.aa, self.ab, self.ba, self.bb]
    }
}

/// A problem found by [`EvaluationSketch::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonPositiveQ(i64),
    NegativeCount { pattern: String, count: i64 },
    CountSumMismatch { sum: i128, q: i64 },
    NegativeTruthSplit { pattern: String },
    TruthSplitMismatch { pattern: String, split: TruthSplit, count: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveQ(q) => write!(f, "test size Q must be positive (got {q})"),
            Violation::NegativeCount { pattern, count } => {
                write!(f, "negative count {count} for pattern {pattern}")
            }
            Violation::CountSumMismatch { sum, q } => {
                write!(f, "pattern counts do not sum to Q (sum {sum}, Q {q})")
            }
            Violation::NegativeTruthSplit { pattern } => {
                write!(f, "negative truth split entry for pattern {pattern}")
            }
            Violation::TruthSplitMismatch { pattern, split, count } => write!(
                f,
                "truth split mismatch for pattern {pattern}: {} + {} != {count}",
                split.true_a, split.true_b
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlipMode {
    /// Swap the classifier's response on every item.
    Global,
    /// Swap it only on items whose true label is A.
    TrueAOnly,
    /// Swap it only on items whose true label is B.
    TrueBOnly,
}

impl FromStr for FlipMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(FlipMode::Global),
            "true-a" => Ok(FlipMode::TrueAOnly),
            "true-b" => Ok(FlipMode::TrueBOnly),
            other => Err(Error::Invalid(format!(
                "unknown flip mode `{other}` (expected global, true-a or true-b)"
            ))),
        }
    }
}

/// Counts of every joint decision pattern an ensemble produced on a test,
/// optionally split by the items' true labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationSketch {
    classifier_ids: Vec<String>,
    q: i64,
    counts: Vec<i64>,
    truth_split: Option<Vec<TruthSplit>>,
}

impl EvaluationSketch {
    /// Builds a sketch from a dense count table in pattern-index order.
    ///
    /// Only the shape is checked here; arithmetic consistency is reported by
    /// [`validate`](Self::validate).
    pub fn from_counts(
        classifier_ids: Vec<String>,
        q: i64,
        counts: Vec<i64>,
        truth_split: Option<Vec<TruthSplit>>,
    ) -> Result<Self> {
        let n = classifier_ids.len();
        if n == 0 {
            return Err(Error::Invalid("a sketch needs at least one classifier".into()));
        }
        if n > MAX_CLASSIFIERS {
            return Err(Error::Invalid(format!(
                "{n} classifiers exceeds the supported maximum of {MAX_CLASSIFIERS}"
            )));
        }
        let mut seen = HashSet::new();
        for id in &classifier_ids {
            if id.is_empty() {
                return Err(Error::Invalid("classifier ids must be non-empty".into()));
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::Invalid(format!("duplicate classifier id `{id}`")));
            }
        }
        if counts.len() != 1 << n {
            return Err(Error::Invalid(format!(
                "expected {} pattern counts for {n} classifiers, got {}",
                1usize << n,
                counts.len()
            )));
        }
        if let Some(ts) = &truth_split {
            if ts.len() != counts.len() {
                return Err(Error::Invalid(format!(
                    "expected {} truth split entries, got {}",
                    counts.len(),
                    ts.len()
                )));
            }
        }
        Ok(EvaluationSketch {
            classifier_ids,
            q,
            counts,
            truth_split,
        })
    }

    /// Builds a sketch from `(pattern, count)` pairs; Q is the total count and
    /// unlisted patterns are zero.
    pub fn from_patterns<I>(classifier_ids: Vec<String>, patterns: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DecisionPattern, i64)>,
    {
        let n = classifier_ids.len();
        let mut counts = vec![0i64; 1usize << n.min(MAX_CLASSIFIERS + 1)];
        for (p, c) in patterns {
            if p.len() != n {
                return Err(Error::Invalid(format!(
                    "pattern {p} has length {}, expected {n}",
                    p.len()
                )));
            }
            counts[p.index()] += c;
        }
        let q = counts.iter().sum();
        Self::from_counts(classifier_ids, q, counts, None)
    }

    /// Builds a truth-split sketch; counts and Q follow from the split.
    pub fn from_truth_split(classifier_ids: Vec<String>, split: Vec<TruthSplit>) -> Result<Self> {
        let counts: Vec<i64> = split.iter().map(|s| s.true_a + s.true_b).collect();
        let q = counts.iter().sum();
        Self::from_counts(classifier_ids, q, counts, Some(split))
    }

    pub fn classifier_ids(&self) -> &[String] {
        &self.classifier_ids
    }

    pub fn n(&self) -> usize {
        self.classifier_ids.len()
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn count(&self, pattern: &DecisionPattern) -> i64 {
        self.counts[pattern.index()]
    }

    pub fn truth_split(&self) -> Option<&[TruthSplit]> {
        self.truth_split.as_deref()
    }

    pub fn has_truth(&self) -> bool {
        self.truth_split.is_some()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.classifier_ids
            .iter()
            .position(|c| c == id)
            .ok_or_else(|| Error::UnknownClassifier(id.to_string()))
    }

    /// Iterates `(pattern, count)` in index order.
    pub fn patterns(&self) -> impl Iterator<Item = (DecisionPattern, i64)> + '_ {
        let n = self.n();
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, c)| (DecisionPattern::from_index(i, n), *c))
    }

    /// Number of items whose true label is A, when the truth is known.
    pub fn true_q_a(&self) -> Option<i64> {
        self.truth_split
            .as_ref()
            .map(|ts| ts.iter().map(|s| s.true_a).sum())
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.q <= 0 {
            out.push(Violation::NonPositiveQ(self.q));
        }
        let n = self.n();
        for (i, &c) in self.counts.iter().enumerate() {
            if c < 0 {
                out.push(Violation::NegativeCount {
                    pattern: DecisionPattern::from_index(i, n).to_string(),
                    count: c,
                });
            }
        }
        let sum: i128 = self.counts.iter().map(|&c| c as i128).sum();
        if sum != self.q as i128 {
            out.push(Violation::CountSumMismatch { sum, q: self.q });
        }
        if let Some(ts) = &self.truth_split {
            for (i, s) in ts.iter().enumerate() {
                let pattern = DecisionPattern::from_index(i, n).to_string();
                if s.true_a < 0 || s.true_b < 0 {
                    out.push(Violation::NegativeTruthSplit {
                        pattern: pattern.clone(),
                    });
                }
                if s.true_a as i128 + s.true_b as i128 != self.counts[i] as i128 {
                    out.push(Violation::TruthSplitMismatch {
                        pattern,
                        split: *s,
                        count: self.counts[i],
                    });
                }
            }
        }
        out
    }

    /// Fails with every violation when the sketch is not internally consistent.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSketch(v.iter().map(|v| v.to_string()).collect()))
        }
    }

    pub fn marginals_at(&self, classifier: usize) -> Marginals {
        let n = self.n();
        let mut m = Marginals { r_a: 0, r_b: 0 };
        for (i, &c) in self.counts.iter().enumerate() {
            if (i >> (n - 1 - classifier)) & 1 == 0 {
                m.r_a += c;
            } else {
                m.r_b += c;
            }
        }
        m
    }

    /// `(R_a, R_b)` for one classifier, summed over the patterns.
    pub fn marginalize(&self, id: &str) -> Result<Marginals> {
        Ok(self.marginals_at(self.index_of(id)?))
    }

    pub fn marginal_summary(&self) -> MarginalSummary {
        MarginalSummary {
            q: self.q,
            classifiers: self
                .classifier_ids
                .iter()
                .enumerate()
                .map(|(k, id)| (id.clone(), self.marginals_at(k)))
                .collect(),
        }
    }

    fn pair_bits(&self, i: usize, j: usize, index: usize) -> usize {
        let n = self.n();
        let bi = (index >> (n - 1 - i)) & 1;
        let bj = (index >> (n - 1 - j)) & 1;
        (bi << 1) | bj
    }

    pub fn pair_counts_at(&self, i: usize, j: usize) -> PairCounts {
        let mut cells = [0i64; 4];
        for (idx, &c) in self.counts.iter().enumerate() {
            cells[self.pair_bits(i, j, idx)] += c;
        }
        PairCounts {
            aa: cells[0],
            ab: cells[1],
            ba: cells[2],
            bb: cells[3],
        }
    }

    pub fn pair_counts(&self, i: &str, j: &str) -> Result<PairCounts> {
        Ok(self.pair_counts_at(self.index_of(i)?, self.index_of(j)?))
    }

    /// Pair decision counts restricted to items with the given true label.
    pub fn pair_counts_given_truth(&self, i: usize, j: usize, truth: Label) -> Result<PairCounts> {
        let ts = self.truth_split.as_ref().ok_or(Error::NoTruthSplit)?;
        let mut cells = [0i64; 4];
        for (idx, s) in ts.iter().enumerate() {
            cells[self.pair_bits(i, j, idx)] += match truth {
                Label::A => s.true_a,
                Label::B => s.true_b,
            };
        }
        Ok(PairCounts {
            aa: cells[0],
            ab: cells[1],
            ba: cells[2],
            bb: cells[3],
        })
    }

    /// Swaps one classifier's responses, everywhere or only on items of one
    /// true label. Applying the same flip twice gives back the original.
    pub fn flip_labels(&self, id: &str, mode: FlipMode) -> Result<EvaluationSketch> {
        let k = self.index_of(id)?;
        let n = self.n();
        if mode != FlipMode::Global && self.truth_split.is_none() {
            return Err(Error::NoTruthSplit);
        }
        let size = self.counts.len();
        let mut counts = vec![0i64; size];
        let truth_split = match &self.truth_split {
            None => {
                for (idx, &c) in self.counts.iter().enumerate() {
                    counts[flip_bit(idx, k, n)] += c;
                }
                None
            }
            Some(ts) => {
                let mut out = vec![TruthSplit::default(); size];
                for (idx, s) in ts.iter().enumerate() {
                    let flipped = flip_bit(idx, k, n);
                    let (to_a, to_b) = match mode {
                        FlipMode::Global => (flipped, flipped),
                        FlipMode::TrueAOnly => (flipped, idx),
                        FlipMode::TrueBOnly => (idx, flipped),
                    };
                    out[to_a].true_a += s.true_a;
                    out[to_b].true_b += s.true_b;
                }
                // Counts outside the split follow the split exactly, except under a
                // global flip where they move with the pattern even if inconsistent.
                if mode == FlipMode::Global {
                    for (idx, &c) in self.counts.iter().enumerate() {
                        counts[flip_bit(idx, k, n)] += c;
                    }
                } else {
                    for (idx, s) in out.iter().enumerate() {
                        counts[idx] = s.true_a + s.true_b;
                    }
                }
                Some(out)
            }
        };
        Ok(EvaluationSketch {
            classifier_ids: self.classifier_ids.clone(),
            q: self.q,
            counts,
            truth_split,
        })
    }

    /// Restricts the sketch to the listed classifiers, in the listed order,
    /// summing out everyone else.
    pub fn project(&self, ids: &[&str]) -> Result<EvaluationSketch> {
        let positions = ids
            .iter()
            .map(|id| self.index_of(id))
            .collect::<Result<Vec<_>>>()?;
        let n = self.n();
        let m = positions.len();
        let new_ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        let remap = |idx: usize| -> usize {
            positions
                .iter()
                .fold(0, |acc, &p| (acc << 1) | ((idx >> (n - 1 - p)) & 1))
        };
        let mut counts = vec![0i64; 1 << m];
        for (idx, &c) in self.counts.iter().enumerate() {
            counts[remap(idx)] += c;
        }
        let truth_split = self.truth_split.as_ref().map(|ts| {
            let mut out = vec![TruthSplit::default(); 1 << m];
            for (idx, s) in ts.iter().enumerate() {
                let t = &mut out[remap(idx)];
                t.true_a += s.true_a;
                t.true_b += s.true_b;
            }
            out
        });
        EvaluationSketch::from_counts(new_ids, self.q, counts, truth_split)
    }

    /// Explicit classifier reordering; `order` must be a permutation of the ids.
    pub fn reorder(&self, order: &[&str]) -> Result<EvaluationSketch> {
        if order.len() != self.n() {
            return Err(Error::Invalid(format!(
                "reorder needs all {} classifiers, got {}",
                self.n(),
                order.len()
            )));
        }
        self.project(order)
    }

    /// Appends a copy of an existing classifier under a new id.
    pub fn with_duplicate(&self, id: &str, new_id: &str) -> Result<EvaluationSketch> {
        let k = self.index_of(id)?;
        let n = self.n();
        let mut ids = self.classifier_ids.clone();
        ids.push(new_id.to_string());
        let target = |idx: usize| (idx << 1) | ((idx >> (n - 1 - k)) & 1);
        let mut counts = vec![0i64; 1 << (n + 1)];
        for (idx, &c) in self.counts.iter().enumerate() {
            counts[target(idx)] = c;
        }
        let truth_split = self.truth_split.as_ref().map(|ts| {
            let mut out = vec![TruthSplit::default(); 1 << (n + 1)];
            for (idx, s) in ts.iter().enumerate() {
                out[target(idx)] = *s;
            }
            out
        });
        EvaluationSketch::from_counts(ids, self.q, counts, truth_split)
    }
}

/// One item's responses, aligned with the table's classifier roster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionRow {
    pub item_id: String,
    pub responses: Vec<Option<Label>>,
    pub truth: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTable {
    pub classifier_ids: Vec<String>,
    pub rows: Vec<DecisionRow>,
}

/// Aggregates per-item decisions into pattern counts. The sketch carries a
/// truth split iff the rows carry truth labels (all of them or none).
pub fn sketch_from_decisions(table: &DecisionTable) -> Result<EvaluationSketch> {
    let n = table.classifier_ids.len();
    if n == 0 || n > MAX_CLASSIFIERS {
        return Err(Error::Invalid(format!("unsupported ensemble size {n}")));
    }
    let with_truth = table.rows.iter().any(|r| r.truth.is_some());
    let mut counts = vec![0i64; 1 << n];
    let mut split = vec![TruthSplit::default(); 1 << n];
    for row in &table.rows {
        if row.responses.len() != n {
            return Err(Error::Invalid(format!(
                "item `{}` has {} responses for {n} classifiers",
                row.item_id,
                row.responses.len()
            )));
        }
        let mut labels = Vec::with_capacity(n);
        for (k, r) in row.responses.iter().enumerate() {
            match r {
                Some(l) => labels.push(*l),
                None => {
                    return Err(Error::MissingResponse {
                        item: row.item_id.clone(),
                        classifier: table.classifier_ids[k].clone(),
                    })
                }
            }
        }
        let idx = DecisionPattern::new(labels).index();
        counts[idx] += 1;
        match (with_truth, row.truth) {
            (true, Some(Label::A)) => split[idx].true_a += 1,
            (true, Some(Label::B)) => split[idx].true_b += 1,
            (true, None) => {
                return Err(Error::Invalid(format!(
                    "item `{}` has no truth label while others do",
                    row.item_id
                )))
            }
            (false, _) => {}
        }
    }
    let q = table.rows.len() as i64;
    EvaluationSketch::from_counts(
        table.classifier_ids.clone(),
        q,
        counts,
        with_truth.then_some(split),
    )
}

/// Unobservable correct-response counts for one classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectCounts {
    pub r_aia: i64,
    pub r_bib: i64,
}

/// Joint correct counts for a pair of classifiers (by roster position).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCorrect {
    pub i: usize,
    pub j: usize,
    pub r_aiaja: i64,
    pub r_bibjb: i64,
}

/// A candidate ground truth: the number of true-A items and each
/// classifier's correct counts, optionally with pair joint-correct counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationPoint {
    pub q_a: i64,
    pub classifiers: Vec<CorrectCounts>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairCorrect>,
}

impl EvaluationPoint {
    pub fn q_b(&self, q: i64) -> i64 {
        q - self.q_a
    }

    /// Lattice-bound violations of this point on a test of size `q`.
    pub fn bound_violations(&self, q: i64) -> Vec<String> {
        let mut out = Vec::new();
        let q_b = q - self.q_a;
        if self.q_a < 0 || self.q_a > q {
            out.push(format!("Q_a = {} outside [0, {q}]", self.q_a));
        }
        for (k, c) in self.classifiers.iter().enumerate() {
            if c.r_aia < 0 || c.r_aia > self.q_a {
                out.push(format!("classifier {k}: R_aia = {} outside [0, {}]", c.r_aia, self.q_a));
            }
            if c.r_bib < 0 || c.r_bib > q_b {
                out.push(format!("classifier {k}: R_bib = {} outside [0, {q_b}]", c.r_bib));
            }
        }
        for p in &self.pairs {
            let (Some(ci), Some(cj)) = (self.classifiers.get(p.i), self.classifiers.get(p.j)) else {
                out.push(format!("pair ({}, {}) refers to an unknown classifier", p.i, p.j));
                continue;
            };
            let max_a = ci.r_aia.min(cj.r_aia);
            let max_b = ci.r_bib.min(cj.r_bib);
            if p.r_aiaja < 0 || p.r_aiaja > max_a {
                out.push(format!(
                    "pair ({}, {}): R_aiaja = {} outside [0, {max_a}]",
                    p.i, p.j, p.r_aiaja
                ));
            }
            if p.r_bibjb < 0 || p.r_bibjb > max_b {
                out.push(format!(
                    "pair ({}, {}): R_bibjb = {} outside [0, {max_b}]",
                    p.i, p.j, p.r_bibjb
                ));
            }
        }
        out
    }
}

/// Correctness requirement a safe classifier must meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SafetySpec {
    /// Accuracy on each label must exceed (or reach) its own threshold.
    PerLabel {
        #[serde(with = "crate::rational::serde_ratio")]
        threshold_a: Rational,
        #[serde(with = "crate::rational::serde_ratio")]
        threshold_b: Rational,
        strict: bool,
    },
    /// Prevalence-weighted accuracy over the whole test.
    Overall {
        #[serde(with = "crate::rational::serde_ratio")]
        threshold: Rational,
        strict: bool,
    },
}

impl SafetySpec {
    pub fn per_label(threshold: Rational, strict: bool) -> Result<Self> {
        let spec = SafetySpec::PerLabel {
            threshold_a: threshold.clone(),
            threshold_b: threshold,
            strict,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn overall(threshold: Rational, strict: bool) -> Result<Self> {
        let spec = SafetySpec::Overall { threshold, strict };
        spec.check()?;
        Ok(spec)
    }

    /// Strictly better than 1/2 on both labels.
    pub fn better_than_half() -> Self {
        SafetySpec::PerLabel {
            threshold_a: crate::rational::ratio(1, 2),
            threshold_b: crate::rational::ratio(1, 2),
            strict: true,
        }
    }

    pub fn check(&self) -> Result<()> {
        let ok = match self {
            SafetySpec::PerLabel {
                threshold_a,
                threshold_b,
                ..
            } => in_unit_interval(threshold_a) && in_unit_interval(threshold_b),
            SafetySpec::Overall { threshold, .. } => in_unit_interval(threshold),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange("safety thresholds must lie in [0, 1]".into()))
        }
    }

    pub fn is_strict(&self) -> bool {
        match self {
            SafetySpec::PerLabel { strict, .. } | SafetySpec::Overall { strict, .. } => *strict,
        }
    }

    /// The same spec with the roles of labels A and B exchanged.
    pub fn swapped(&self) -> SafetySpec {
        match self {
            SafetySpec::PerLabel {
                threshold_a,
                threshold_b,
                strict,
            } => SafetySpec::PerLabel {
                threshold_a: threshold_b.clone(),
                threshold_b: threshold_a.clone(),
                strict: *strict,
            },
            other => other.clone(),
        }
    }
}
